#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "maxharm/partition.hpp"

namespace maxharm {

/// Symbol class parameters (order m, exotic parameters rho/delta, linearity l).
struct SymbolClassParams {
  double m = 0.0;
  double rho = 0.5;
  double delta = 0.5;
  int l = 1;
  int n = 1;

  void validate() const {
    require(0.0 <= delta && delta <= rho && rho < 1.0,
            "SymbolClassParams: need 0 <= delta <= rho < 1");
    require(l >= 1, "SymbolClassParams: linearity l must be >= 1");
    require(n == 1 || n == 2, "SymbolClassParams: dimension must be 1 or 2");
  }
};

/// Frequency factor of one modulation term; xi has n*l entries.
using FreqFn = std::function<cplx(std::span<const double>)>;

/// One additive term g(xi) e^{2pi i <v,x>} of a symbol.
struct SymbolTerm {
  FreqFn g;
  std::array<double, 2> v{0.0, 0.0};
};

struct SymbolDescriptor {
  std::string family = "constant";
  double m = 0, rho = 0, delta = 0;
  int l = 1, n = 1, K = 0;
  std::uint64_t seed = 0;
  std::string note;
};

/// A symbol sigma(x, xi_1..xi_l), stored as a finite sum of terms whose
/// x-dependence is a pure modulation. Every family below (and the pieces and
/// dilates derived from them) has this shape, which both the generic
/// evaluator and the operator application paths exploit. Immutable.
class Symbol {
 public:
  Symbol(SymbolClassParams params, std::vector<SymbolTerm> terms, SymbolDescriptor desc)
      : params_(params), terms_(std::move(terms)), desc_(std::move(desc)) {
    params_.validate();
  }

  const SymbolClassParams& params() const { return params_; }
  const std::vector<SymbolTerm>& terms() const { return terms_; }
  const SymbolDescriptor& descriptor() const { return desc_; }
  std::optional<int> piece_index() const { return piece_; }
  Symbol with_piece_index(int k) const {
    Symbol s = *this;
    s.piece_ = k;
    return s;
  }

  cplx eval(std::span<const double> x, std::span<const double> xi) const {
    cplx acc(0.0, 0.0);
    for (const auto& t : terms_) {
      double phase = 0.0;
      for (int a = 0; a < params_.n; ++a) phase += t.v[size_t(a)] * x[size_t(a)];
      acc += t.g(xi) * std::polar(1.0, kTwoPi * phase);
    }
    return acc;
  }

 private:
  SymbolClassParams params_;
  std::vector<SymbolTerm> terms_;
  SymbolDescriptor desc_;
  std::optional<int> piece_;
};

/// sigma == 1 with declared class parameters.
Symbol constant_symbol(SymbolClassParams params);

/// x-independent symbol from a frequency closure.
Symbol multiplier_symbol(SymbolClassParams params, FreqFn g, std::string note = "multiplier");

/// sum_{k=1..K} c_k 2^{km} psi_hat(2^{-k}|xi|) e^{2pi i <v_k,x>} with
/// |v_k| = 2^{k rho}/(2 pi) and unimodular seeded c_k. Band-limited to the
/// range where the grid partition sums to one.
Symbol dyadic_modulation_symbol(SymbolClassParams params, int K, std::uint64_t seed,
                                const GridSpec& spec);

/// x-independent (1 - phi_hat(xi)) (1 + |xi|^2)^{m/2} e^{i |xi|^{1-rho}},
/// band-limited to the grid; lies in S^m_{rho,0}.
Symbol oscillatory_symbol(double m, double rho, const GridSpec& spec);

/// Littlewood-Paley pieces sigma_0 = sigma phi_hat, sigma_k = sigma psi_hat_k.
/// The pieces sum back to sigma wherever the partition sums to one (all grid
/// frequencies when sigma is band-limited, as the families above are).
std::vector<Symbol> lp_pieces(const Symbol& sigma, const LpPartition& p);

/// tau(x, xi) = sigma_k(2^{-lambda k} x, 2^{lambda k} xi) for 0 <= lambda <= rho.
/// The returned symbol carries the transformed class parameters
/// (m/(1-lambda), (rho-lambda)/(1-lambda)) it certifies against.
Symbol dilate_symbol(const Symbol& piece, double lambda, int k);

struct SeminormEntry {
  std::vector<int> orders;  // per-axis derivative orders: n x-axes then n*l xi-axes
  double value = 0.0;
};

struct SeminormReport {
  std::vector<SeminormEntry> entries;
  double max_entry = 0.0;
  bool pass = false;
  double ceiling = 0.0;
  SymbolClassParams declared;

  double entry(std::span<const int> orders) const;
};

inline constexpr double kDefaultSeminormCeiling = 4.0 * kPi * kPi + 1.0;

/// Certification ceiling for the seminorm table of an (n, l, rho) symbol
/// family. The linear order-2 entries are governed by 4 pi^2, the
/// second-derivative constant of the annulus profile; multilinear tables
/// contain mixed per-factor entries whose profile constants compound per
/// factor, and the class weight contributes a band-edge factor growing with
/// rho. Wrong order declarations overshoot any of these ceilings by 2^K and
/// stay cleanly rejected.
inline double default_seminorm_ceiling(int n, int l, double rho = 0.5) {
  int d = n * l;
  return std::pow(kDefaultSeminormCeiling, d) * std::pow(4.0, d - 1) *
         std::pow(2.0, 2.0 * d * rho);
}

/// Finite-difference estimate of the class constants C_{alpha,beta}:
/// sup over a sample lattice of |D^alpha_x D^beta_xi sigma| divided by
/// (1 + |xi_1| + ... + |xi_l|)^{m + delta|alpha| - rho|beta|}, for all
/// multi-indices with |alpha| <= max_order and |beta_j| <= max_order.
/// Central differences with step equal to the grid spacing.
SeminormReport estimate_seminorms(const Symbol& sigma, const SymbolClassParams& declared,
                                  const GridSpec& spec, int max_order = 2,
                                  double ceiling = kDefaultSeminormCeiling);

}  // namespace maxharm
