#pragma once
// Littlewood-Paley block operators and grid-truncated Besov norms.

#include <memory>
#include <vector>

#include "bsq/lp/filter.hpp"
#include "bsq/spectral/field.hpp"

namespace bsq::lp {

using spectral::Samples;
using spectral::ScalarField;

// Delta_q f. Zero for q < -1; throws std::out_of_range for q > q_max.
ScalarField block(const ScalarField& f, int q);
// S_p f = sum_{q' <= p-1} Delta_q' f.
ScalarField low_cutoff(const ScalarField& f, int p);
// Delta_{q-1} + Delta_q + Delta_{q+1}, with out-of-range neighbours dropped.
ScalarField block_tilde(const ScalarField& f, int q);

// ||Delta_q f||_{L^p} for q = -1 .. q_max (index q + 1).
std::vector<double> block_norms(const ScalarField& f, double p);
// l^r aggregation of 2^{qs} norms[q+1].
double besov_from_blocks(const std::vector<double>& norms, double s, double r);
// Grid-truncated B^s_{p,r} norm over q in [-1, q_max].
double besov_norm(const ScalarField& f, const BesovSpec& spec);

// Physical samples of every block of one field, computed once. Used where
// many products of blocks are needed (paraproducts, diagnostics).
class BlockDecomposition {
 public:
  explicit BlockDecomposition(const ScalarField& f);
  int q_max() const noexcept { return q_max_; }
  int n() const noexcept { return n_; }
  // Physical Delta_q f; zero samples outside [-1, q_max].
  const Samples& block(int q) const;
  // Physical S_p f.
  const Samples& low(int p) const;
  const Samples& tilde(int q) const;
  double block_norm(int q, double p) const;

 private:
  int n_;
  int q_max_;
  std::vector<Samples> blocks_;  // q + 1
  std::vector<Samples> lows_;    // p, clamped to [0, q_max + 1]
  std::vector<Samples> tildes_;  // q + 1
  Samples zero_;
};

struct HeatBlockDecay {
  int q = 0;
  std::vector<double> lambda;
  std::vector<double> linf_ratio;  // ||e^{lambda Delta} Delta_q g||_inf / ||Delta_q g||_inf
  std::vector<double> l2_ratio;
  std::vector<double> l2_floor;    // exp(-lambda (3/4)^2 4^q)
  // Least-squares slope of -log(linf_ratio) against lambda and the
  // largest ratio * exp(rate * lambda) over the grid.
  double fitted_rate = 0.0;
  double fitted_constant = 0.0;
  bool l2_bound_holds = true;
};

// Throws std::invalid_argument if Delta_q g vanishes or q < 0.
HeatBlockDecay heat_block_decay(const ScalarField& g, int q,
                                const std::vector<double>& lambdas);

}  // namespace bsq::lp
