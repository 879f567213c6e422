#pragma once

// Systematic Reed-Solomon code over GF(2^m), 2 <= m <= 16, with a bounded
// distance decoder (Berlekamp-Massey, Chien search, Forney).
//
// Bit layout: symbol j occupies bits [j*m, (j+1)*m), least significant bit
// first. Codeword symbols 0..k-1 are the data, k..n-1 the parity. Symbol j is
// the coefficient of x^(n-1-j) and the generator has roots alpha^1..alpha^(n-k).

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "compgap/bitstring.hpp"
#include "compgap/errors.hpp"

namespace compgap {

class GaloisField {
 public:
  using Elem = std::uint32_t;

  /// Primitive polynomials for m = 2..16, x^m term included.
  static constexpr std::array<std::uint32_t, 17> kPrimitive = {0,      0,      0x7,    0xB,    0x13,   0x25,
                                                               0x43,   0x89,   0x11D,  0x211,  0x409,  0x805,
                                                               0x1053, 0x201B, 0x4443, 0x8003, 0x1100B};

  explicit GaloisField(int m) : m_(m) {
    if (m < 2 || m > 16) throw ConfigError("GF(2^m) supports 2 <= m <= 16");
    size_ = 1U << m;
    exp_.assign(2 * size_, 0);
    log_.assign(size_, 0);
    Elem x = 1;
    for (Elem i = 0; i < size_ - 1; ++i) {
      exp_[i] = x;
      log_[x] = i;
      x <<= 1;
      if (x & size_) x ^= kPrimitive[static_cast<std::size_t>(m)];
    }
    for (Elem i = size_ - 1; i < 2 * size_; ++i) exp_[i] = exp_[i - (size_ - 1)];
  }

  /// Shared instance per m; tables are built once.
  static const GaloisField& get(int m) {
    static const auto fields = [] {
      std::array<std::unique_ptr<GaloisField>, 17> f;
      for (int i = 2; i <= 16; ++i) f[static_cast<std::size_t>(i)] = std::make_unique<GaloisField>(i);
      return f;
    }();
    if (m < 2 || m > 16) throw ConfigError("GF(2^m) supports 2 <= m <= 16");
    return *fields[static_cast<std::size_t>(m)];
  }

  int bits() const noexcept { return m_; }
  Elem size() const noexcept { return size_; }
  Elem order() const noexcept { return size_ - 1; }

  Elem mul(Elem a, Elem b) const noexcept {
    if (a == 0 || b == 0) return 0;
    return exp_[log_[a] + log_[b]];
  }
  Elem div(Elem a, Elem b) const {
    if (b == 0) throw Error("division by zero in GF(2^m)");
    if (a == 0) return 0;
    return exp_[log_[a] + order() - log_[b]];
  }
  Elem inv(Elem a) const { return div(1, a); }
  /// alpha^e for any non-negative exponent.
  Elem alpha_pow(std::uint64_t e) const noexcept { return exp_[e % order()]; }
  Elem log(Elem a) const noexcept { return log_[a]; }
  Elem exp(Elem e) const noexcept { return exp_[e]; }

 private:
  int m_;
  Elem size_;
  std::vector<Elem> exp_;
  std::vector<Elem> log_;
};

struct EccParams {
  int bits_per_symbol = 16;
  std::size_t k_sym = 32;
  std::size_t n_sym = 608;

  std::size_t data_bits() const noexcept { return static_cast<std::size_t>(bits_per_symbol) * k_sym; }
  std::size_t code_bits() const noexcept { return static_cast<std::size_t>(bits_per_symbol) * n_sym; }
  /// Guaranteed correctable bit flips: one flipped bit corrupts at most one symbol.
  std::size_t t_max() const noexcept { return (n_sym - k_sym) / 2; }
  double code_rate() const noexcept { return static_cast<double>(k_sym) / static_cast<double>(n_sym); }
  double error_rate() const noexcept { return static_cast<double>(t_max()) / static_cast<double>(code_bits()); }

  void validate() const {
    if (bits_per_symbol < 2 || bits_per_symbol > 16) throw ConfigError("ecc.bits_per_symbol must be in [2, 16]");
    if (k_sym < 1) throw ConfigError("ecc.k_sym must be at least 1");
    if (n_sym <= k_sym) throw ConfigError("ecc.n_sym must exceed ecc.k_sym");
    if (n_sym > (std::size_t{1} << bits_per_symbol) - 1) {
      throw ConfigError("ecc.n_sym must not exceed 2^bits_per_symbol - 1 (" +
                        std::to_string((std::size_t{1} << bits_per_symbol) - 1) + ")");
    }
  }

  friend bool operator==(const EccParams&, const EccParams&) = default;
  friend auto operator<=>(const EccParams&, const EccParams&) = default;
};

class ReedSolomon {
 public:
  using Elem = GaloisField::Elem;

  explicit ReedSolomon(const EccParams& params) : params_(params), gf_(&GaloisField::get(params.bits_per_symbol)) {
    params_.validate();
    std::size_t nroots = parity_symbols();
    // generator, highest degree first: g[0] = 1
    generator_.assign(1, 1);
    for (std::size_t i = 0; i < nroots; ++i) {
      Elem root = gf_->alpha_pow(kFirstRoot + i);
      std::vector<Elem> next(generator_.size() + 1, 0);
      for (std::size_t j = 0; j < generator_.size(); ++j) {
        next[j] ^= generator_[j];
        next[j + 1] ^= gf_->mul(generator_[j], root);
      }
      generator_ = std::move(next);
    }
    // Parity contribution of each data position for a unit symbol; encoding
    // is then a linear combination of these rows.
    std::size_t k = params_.k_sym;
    parity_log_rows_.assign(k * nroots, kLogZero);
    for (std::size_t pos = 0; pos < k; ++pos) {
      std::vector<Elem> data(k, 0);
      data[pos] = 1;
      auto parity = lfsr_parity(data);
      for (std::size_t r = 0; r < nroots; ++r) {
        parity_log_rows_[pos * nroots + r] = parity[r] == 0 ? kLogZero : gf_->log(parity[r]);
      }
    }
  }

  const EccParams& params() const noexcept { return params_; }
  std::size_t parity_symbols() const noexcept { return params_.n_sym - params_.k_sym; }

  BitString encode(const BitString& message) const {
    if (message.size() != params_.data_bits()) {
      throw LengthError("ecc_encode expects " + std::to_string(params_.data_bits()) + " message bits, got " +
                        std::to_string(message.size()));
    }
    auto data = to_symbols(message, params_.k_sym);
    auto parity = parity_of(data);
    BitString code(params_.code_bits());
    code.assign(0, message);
    std::size_t m = static_cast<std::size_t>(params_.bits_per_symbol);
    for (std::size_t r = 0; r < parity.size(); ++r) code.write_bits((params_.k_sym + r) * m, m, parity[r]);
    return code;
  }

  /// Returns the message when the codeword is within t_max symbol errors of a
  /// codeword, std::nullopt (decode failure) otherwise.
  std::optional<BitString> decode(const BitString& codeword) const {
    if (codeword.size() != params_.code_bits()) {
      throw LengthError("ecc_decode expects " + std::to_string(params_.code_bits()) + " codeword bits, got " +
                        std::to_string(codeword.size()));
    }
    auto symbols = to_symbols(codeword, params_.n_sym);
    if (!correct(symbols)) return std::nullopt;
    BitString out(params_.data_bits());
    std::size_t m = static_cast<std::size_t>(params_.bits_per_symbol);
    for (std::size_t j = 0; j < params_.k_sym; ++j) out.write_bits(j * m, m, symbols[j]);
    return out;
  }

  /// Corrects `symbols` in place; false when the word is not within t_max
  /// symbol errors of any codeword.
  bool correct(std::vector<Elem>& symbols) const {
    const std::size_t n = params_.n_sym;
    const std::size_t k = params_.k_sym;
    const std::size_t nroots = parity_symbols();
    if (is_codeword(symbols)) return true;

    std::vector<Elem> syn(nroots, 0);
    for (std::size_t i = 0; i < nroots; ++i) {
      Elem root = gf_->alpha_pow(kFirstRoot + i);
      Elem acc = 0;
      for (std::size_t j = 0; j < n; ++j) acc = gf_->mul(acc, root) ^ symbols[j];
      syn[i] = acc;
    }

    // Berlekamp-Massey: lambda[0..] lowest degree first.
    std::vector<Elem> lambda(nroots + 1, 0), prev(nroots + 1, 0), tmp;
    lambda[0] = 1;
    prev[0] = 1;
    std::size_t len = 0;
    std::size_t shift = 1;
    Elem prev_disc = 1;
    for (std::size_t r = 0; r < nroots; ++r) {
      Elem disc = syn[r];
      for (std::size_t i = 1; i <= len; ++i) disc ^= gf_->mul(lambda[i], syn[r - i]);
      if (disc == 0) {
        ++shift;
        continue;
      }
      Elem coef = gf_->div(disc, prev_disc);
      if (2 * len <= r) {
        tmp = lambda;
        for (std::size_t i = 0; i + shift <= nroots; ++i) lambda[i + shift] ^= gf_->mul(coef, prev[i]);
        len = r + 1 - len;
        prev = std::move(tmp);
        prev_disc = disc;
        shift = 1;
      } else {
        for (std::size_t i = 0; i + shift <= nroots; ++i) lambda[i + shift] ^= gf_->mul(coef, prev[i]);
        ++shift;
      }
    }
    std::size_t degree = 0;
    for (std::size_t i = 0; i <= nroots; ++i) {
      if (lambda[i] != 0) degree = i;
    }
    if (degree != len || degree == 0 || degree > params_.t_max()) return false;

    // Chien search over the n valid positions. Position j carries power p = n-1-j.
    std::vector<std::size_t> positions;
    std::vector<Elem> locators;
    for (std::size_t j = 0; j < n; ++j) {
      std::size_t p = n - 1 - j;
      Elem x_inv = gf_->alpha_pow(gf_->order() - (p % gf_->order()));
      Elem acc = 0;
      for (std::size_t i = degree + 1; i-- > 0;) acc = gf_->mul(acc, x_inv) ^ lambda[i];
      if (acc == 0) {
        positions.push_back(j);
        locators.push_back(gf_->alpha_pow(p));
      }
    }
    if (positions.size() != degree) return false;

    // Forney: omega = S(x) * lambda(x) mod x^nroots; with first root alpha^1,
    // e = omega(X^-1) / lambda'(X^-1).
    std::vector<Elem> omega(nroots, 0);
    for (std::size_t i = 0; i < nroots; ++i) {
      Elem acc = 0;
      for (std::size_t j = 0; j <= std::min(i, degree); ++j) acc ^= gf_->mul(lambda[j], syn[i - j]);
      omega[i] = acc;
    }
    for (std::size_t e = 0; e < positions.size(); ++e) {
      Elem x_inv = gf_->inv(locators[e]);
      Elem num = 0;
      for (std::size_t i = nroots; i-- > 0;) num = gf_->mul(num, x_inv) ^ omega[i];
      // formal derivative keeps odd-degree terms: lambda'(x) = sum lambda[2i+1] x^(2i)
      Elem den = 0;
      Elem x_inv_sq = gf_->mul(x_inv, x_inv);
      Elem pw = 1;
      for (std::size_t i = 1; i <= degree; i += 2) {
        den ^= gf_->mul(lambda[i], pw);
        pw = gf_->mul(pw, x_inv_sq);
      }
      if (den == 0) return false;
      symbols[positions[e]] ^= gf_->div(num, den);
    }
    (void)k;
    return is_codeword(symbols);
  }

 private:
  static constexpr std::uint64_t kFirstRoot = 1;
  static constexpr Elem kLogZero = ~Elem{0};

  std::vector<Elem> to_symbols(const BitString& bits, std::size_t count) const {
    std::size_t m = static_cast<std::size_t>(params_.bits_per_symbol);
    std::vector<Elem> out(count);
    for (std::size_t j = 0; j < count; ++j) out[j] = static_cast<Elem>(bits.read_bits(j * m, m));
    return out;
  }

  // Remainder of data(x) * x^nroots divided by the generator, by long division.
  std::vector<Elem> lfsr_parity(const std::vector<Elem>& data) const {
    std::size_t nroots = parity_symbols();
    std::vector<Elem> reg(nroots, 0);
    for (Elem d : data) {
      Elem feedback = d ^ reg[0];
      for (std::size_t i = 0; i + 1 < nroots; ++i) reg[i] = reg[i + 1] ^ gf_->mul(feedback, generator_[i + 1]);
      reg[nroots - 1] = gf_->mul(feedback, generator_[nroots]);
    }
    return reg;
  }

  std::vector<Elem> parity_of(const std::vector<Elem>& data) const {
    std::size_t nroots = parity_symbols();
    std::vector<Elem> parity(nroots, 0);
    for (std::size_t pos = 0; pos < data.size(); ++pos) {
      if (data[pos] == 0) continue;
      Elem lg = gf_->log(data[pos]);
      const Elem* row = &parity_log_rows_[pos * nroots];
      for (std::size_t r = 0; r < nroots; ++r) {
        if (row[r] != kLogZero) parity[r] ^= gf_->exp(lg + row[r]);
      }
    }
    return parity;
  }

  bool is_codeword(const std::vector<Elem>& symbols) const {
    std::vector<Elem> data(symbols.begin(), symbols.begin() + static_cast<std::ptrdiff_t>(params_.k_sym));
    auto parity = parity_of(data);
    for (std::size_t r = 0; r < parity.size(); ++r) {
      if (parity[r] != symbols[params_.k_sym + r]) return false;
    }
    return true;
  }

  EccParams params_;
  const GaloisField* gf_;
  std::vector<Elem> generator_;
  std::vector<Elem> parity_log_rows_;
};

/// Process-wide codec cache; building a generator of high degree is costly.
inline std::shared_ptr<const ReedSolomon> reed_solomon_for(const EccParams& params) {
  static std::mutex mu;
  static std::map<EccParams, std::shared_ptr<const ReedSolomon>> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(params);
  if (it != cache.end()) return it->second;
  auto codec = std::make_shared<const ReedSolomon>(params);
  cache.emplace(params, codec);
  return codec;
}

inline BitString ecc_encode(const EccParams& params, const BitString& message) {
  return reed_solomon_for(params)->encode(message);
}

inline std::optional<BitString> ecc_decode(const EccParams& params, const BitString& codeword) {
  return reed_solomon_for(params)->decode(codeword);
}

}  // namespace compgap
