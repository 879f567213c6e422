#pragma once

#include "compgap/attackers.hpp"
#include "compgap/base_problems.hpp"
#include "compgap/bitstring.hpp"
#include "compgap/circuit.hpp"
#include "compgap/config.hpp"
#include "compgap/cnf.hpp"
#include "compgap/constructions.hpp"
#include "compgap/errors.hpp"
#include "compgap/experiments.hpp"
#include "compgap/game.hpp"
#include "compgap/np_forge.hpp"
#include "compgap/ots.hpp"
#include "compgap/parallel.hpp"
#include "compgap/random.hpp"
#include "compgap/reed_solomon.hpp"
#include "compgap/solver.hpp"
#include "compgap/toy_hash.hpp"
