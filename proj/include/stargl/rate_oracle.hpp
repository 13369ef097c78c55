#ifndef STARGL_RATE_ORACLE_HPP_
#define STARGL_RATE_ORACLE_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <vector>

#include "stargl/channel.hpp"
#include "stargl/config.hpp"
#include "stargl/rng.hpp"
#include "stargl/star_ris.hpp"
#include "stargl/types.hpp"

namespace stargl {

// H_eff,l = G_l^H Phi_l H, shape N_l x M.
inline CMat effective_channel(const ChannelRealization& ch, const StarRisConfig& ris, Side side) {
  const CMat& g = (side == Side::r) ? ch.g_user_r : ch.g_user_t;
  const CVec d = phi_diagonal(ris, side);
  return g.adjoint() * d.asDiagonal() * ch.h_bs_ris;
}

// R_l = log2(1 + ||H_eff,l w||^2 / sigma2); the determinant form collapses
// to this scalar expression for a vector precoder.
inline double rate(const ChannelRealization& ch, const StarRisConfig& ris, const CVec& w, Side side,
                   double sigma2) {
  if (sigma2 <= 0.0) throw DomainError("rate: sigma2 must be > 0");
  const CMat h_eff = effective_channel(ch, ris, side);
  const double snr = (h_eff * w).squaredNorm() / sigma2;
  return std::log2(1.0 + snr);
}

struct PrecodingSolution {
  CVec w;
  StarRisConfig ris;
  double rate_r = 0.0;
  double rate_t = 0.0;
  double objective = 0.0;
};

enum class BcdObjective { sum_rate, min_rate };

inline BcdObjective parse_objective(const std::string& name) {
  if (name == "sum_rate") return BcdObjective::sum_rate;
  if (name == "min_rate") return BcdObjective::min_rate;
  throw ConfigError("objective must be sum_rate or min_rate, got '" + name + "'");
}

// Global-phase canonicalization: rotate w so its largest-magnitude entry is
// real non-negative. Rate is invariant; regression targets become well-posed.
inline CVec canonicalize_w(const CVec& w) {
  Eigen::Index imax = 0;
  double best = -1.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    const double a = std::abs(w(i));
    if (a > best) {
      best = a;
      imax = i;
    }
  }
  if (best <= 0.0) return w;
  const cxd rot = std::conj(w(imax)) / best;
  return rot * w;
}

inline void check_power(const CVec& w, double p_t) {
  const double n2 = w.squaredNorm();
  if (n2 > p_t * (1.0 + 1e-9))
    throw ConstraintError("precoder power " + std::to_string(n2) + " exceeds budget " +
                          std::to_string(p_t));
}

namespace detail {

inline double obj_from_snr(BcdObjective obj, double snr_r, double snr_t) {
  const double rr = std::log2(1.0 + snr_r);
  const double rt = std::log2(1.0 + snr_t);
  return obj == BcdObjective::sum_rate ? rr + rt : std::min(rr, rt);
}

// Monotone surrogate for grid comparisons; avoids log calls in hot loops.
// sum_rate: (1+a)(1+b) orders identically to log2(1+a)+log2(1+b);
// min_rate: min(a,b) orders identically to min of the rates.
inline double metric_from_snr(BcdObjective obj, double snr_r, double snr_t) {
  return obj == BcdObjective::sum_rate ? (1.0 + snr_r) * (1.0 + snr_t) : std::min(snr_r, snr_t);
}

// Shared evaluation state for one channel: cascaded per-element columns and
// the received-direction vectors u_l = sum_n phi_{l,n} c_{l,n} t_n with
// t_n = (H w)_n.
struct PairEvaluator {
  const ChannelRealization& ch;
  double sigma2;
  double p_t;
  BcdObjective obj;
  CMat c_r;  // G_r^H, N_r x N
  CMat c_t;  // G_t^H, N_t x N

  PairEvaluator(const ChannelRealization& ch_, double sigma2_, double p_t_, BcdObjective obj_)
      : ch(ch_), sigma2(sigma2_), p_t(p_t_), obj(obj_),
        c_r(ch_.g_user_r.adjoint()), c_t(ch_.g_user_t.adjoint()) {}

  CVec t_of(const CVec& w) const { return ch.h_bs_ris * w; }

  CVec u_of(Side side, const CVec& phi_diag, const CVec& t) const {
    const CMat& c = (side == Side::r) ? c_r : c_t;
    return c * phi_diag.cwiseProduct(t);
  }

  double snr_of(const CVec& u) const { return u.squaredNorm() / sigma2; }

  double objective_of(const CVec& phi_r, const CVec& phi_t, const CVec& w) const {
    const CVec t = t_of(w);
    return obj_from_snr(obj, snr_of(u_of(Side::r, phi_r, t)), snr_of(u_of(Side::t, phi_t, t)));
  }
};

// Dominant eigenvector of A_r + A_t scaled to sqrt(P_t), with
// A_l = H_eff,l^H H_eff,l. Deterministic (Eigen's self-adjoint solver).
inline CVec eigen_precoder(const PairEvaluator& ev, const CVec& phi_r, const CVec& phi_t) {
  const CMat h_eff_r = ev.c_r * phi_r.asDiagonal() * ev.ch.h_bs_ris;
  const CMat h_eff_t = ev.c_t * phi_t.asDiagonal() * ev.ch.h_bs_ris;
  const CMat a = h_eff_r.adjoint() * h_eff_r + h_eff_t.adjoint() * h_eff_t;
  Eigen::SelfAdjointEigenSolver<CMat> es(a);
  CVec w = es.eigenvectors().col(a.rows() - 1);
  return std::sqrt(ev.p_t) * w;
}

}  // namespace detail

struct BcdResult {
  PrecodingSolution solution;
  std::vector<double> trace;  // objective after init and after each accepted block step
  int iterations = 0;
};

// Block coordinate ascent over (w | per-element RIS coefficients).
//
// w-step: projected gradient ascent on {w : ||w||^2 <= P_t} with Armijo-free
// backtracking acceptance (accept only on improvement), warm-started from the
// better of the incumbent and the dominant-eigenvector candidate.
// RIS-step: per element, joint grid search over (theta_r, theta_t, alpha^2)
// with the incumbent always competing, so every accepted sub-step is
// non-decreasing in the objective.
//
// The seed parameter is reserved for future randomized variants; the
// optimizer itself is deterministic given (ch, cfg, settings).
inline BcdResult bcd_optimize(const ChannelRealization& ch, const SystemConfig& cfg,
                              const BcdConfig& settings, std::uint64_t /*seed*/ = 0) {
  settings.validate();
  const int n = cfg.ris_elements();
  const int m = cfg.m_bs;
  const BcdObjective objective = parse_objective(settings.objective);
  detail::PairEvaluator ev(ch, cfg.sigma2_dl, cfg.p_t, objective);

  const AmplitudeGrid amp = amplitude_grid(settings.amplitude_grid);
  const int n_phase = settings.phase_grid;
  std::vector<double> phase_vals(n_phase);
  for (int p = 0; p < n_phase; ++p) phase_vals[p] = 2.0 * kPi * p / n_phase;

  // Initial amplitude level: the grid point nearest alpha^2 = 0.5 (lower
  // index on ties) keeps the starting point inside the search grid.
  int init_level = 0;
  {
    double best = std::numeric_limits<double>::infinity();
    for (int k = 0; k < amp.size(); ++k) {
      const double d = std::abs(amp.alpha_r[k] * amp.alpha_r[k] - 0.5);
      if (d < best - 1e-15) {
        best = d;
        init_level = k;
      }
    }
  }

  // Joint-codeword initialization: same DFT codeword on both sides, the
  // eigen precoder for each, keep the best objective (lowest index ties).
  const PhaseCodebook cb = dft_codebook(cfg.n_h, cfg.n_v);
  StarRisConfig ris;
  CVec w;
  double cur_obj = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < cb.size(); ++j) {
    StarRisConfig cand =
        uniform_config(cb.codewords[j], amp.alpha_r[init_level], amp.alpha_t[init_level]);
    const CVec phi_r = phi_diagonal(cand, Side::r);
    const CVec phi_t = phi_diagonal(cand, Side::t);
    const CVec w_cand = detail::eigen_precoder(ev, phi_r, phi_t);
    const double o = ev.objective_of(phi_r, phi_t, w_cand);
    if (o > cur_obj) {
      cur_obj = o;
      ris = std::move(cand);
      w = w_cand;
    }
  }

  BcdResult result;
  result.trace.push_back(cur_obj);

  auto guard_finite = [&](double v) {
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os << "bcd_optimize: non-finite objective; trace =";
      for (double x : result.trace) os << ' ' << x;
      throw NumericalError(os.str());
    }
  };

  const double ln2 = std::log(2.0);
  for (int iter = 0; iter < settings.max_iters; ++iter) {
    const double obj_before = cur_obj;
    const CVec phi_r = phi_diagonal(ris, Side::r);
    const CVec phi_t = phi_diagonal(ris, Side::t);

    // ---- w-step ----
    {
      const CMat h_eff_r = ev.c_r * phi_r.asDiagonal() * ch.h_bs_ris;
      const CMat h_eff_t = ev.c_t * phi_t.asDiagonal() * ch.h_bs_ris;
      const CMat a_r = h_eff_r.adjoint() * h_eff_r;
      const CMat a_t = h_eff_t.adjoint() * h_eff_t;

      auto f_of = [&](const CVec& v) {
        const double snr_r = (v.adjoint() * a_r * v).real()(0) / ev.sigma2;
        const double snr_t = (v.adjoint() * a_t * v).real()(0) / ev.sigma2;
        return detail::obj_from_snr(objective, snr_r, snr_t);
      };
      auto grad_of = [&](const CVec& v) {
        const double q_r = (v.adjoint() * a_r * v).real()(0);
        const double q_t = (v.adjoint() * a_t * v).real()(0);
        CVec g;
        if (objective == BcdObjective::sum_rate) {
          g = (2.0 / ln2) * (a_r * v / (ev.sigma2 + q_r) + a_t * v / (ev.sigma2 + q_t));
        } else {
          g = (q_r <= q_t) ? CVec((2.0 / ln2) * a_r * v / (ev.sigma2 + q_r))
                           : CVec((2.0 / ln2) * a_t * v / (ev.sigma2 + q_t));
        }
        return g;
      };
      auto project = [&](CVec v) {
        const double n2 = v.squaredNorm();
        if (n2 > ev.p_t) v *= std::sqrt(ev.p_t / n2);
        return v;
      };

      CVec w_try = detail::eigen_precoder(ev, phi_r, phi_t);
      if (f_of(w_try) < f_of(w)) w_try = w;
      double f_cur = f_of(w_try);
      for (int inner = 0; inner < settings.w_inner_iters; ++inner) {
        const CVec g = grad_of(w_try);
        const double gnorm = g.norm();
        if (gnorm <= 1e-30) break;
        double step = settings.step_init * std::sqrt(ev.p_t) / gnorm;
        bool accepted = false;
        for (int bt = 0; bt < settings.max_backtracks; ++bt) {
          const CVec cand = project(w_try + step * g);
          const double f_cand = f_of(cand);
          if (f_cand > f_cur) {
            w_try = cand;
            f_cur = f_cand;
            accepted = true;
            break;
          }
          step *= settings.step_shrink;
        }
        if (!accepted) break;
      }
      if (f_cur > cur_obj) {
        w = w_try;
        cur_obj = f_cur;
      }
      guard_finite(cur_obj);
      result.trace.push_back(cur_obj);
    }

    // ---- RIS-step ----
    {
      const CVec t = ev.t_of(w);
      CVec u_r = ev.u_of(Side::r, phi_diagonal(ris, Side::r), t);
      CVec u_t = ev.u_of(Side::t, phi_diagonal(ris, Side::t), t);

      for (int elem = 0; elem < n; ++elem) {
        const CVec col_r = ev.c_r.col(elem) * t(elem);
        const CVec col_t = ev.c_t.col(elem) * t(elem);
        const cxd phi_r_cur = ris.alpha_r(elem) * std::exp(kJ * ris.theta_r(elem));
        const cxd phi_t_cur = ris.alpha_t(elem) * std::exp(kJ * ris.theta_t(elem));
        const CVec base_r = u_r - phi_r_cur * col_r;
        const CVec base_t = u_t - phi_t_cur * col_t;

        double best_metric =
            detail::metric_from_snr(objective, ev.snr_of(u_r), ev.snr_of(u_t));
        int best_pr = -1, best_pt = -1, best_ka = -1;
        const int rows_r = static_cast<int>(base_r.size());
        const int rows_t = static_cast<int>(base_t.size());
        for (int pr = 0; pr < n_phase; ++pr) {
          const cxd er = std::exp(kJ * phase_vals[pr]);
          for (int pt = 0; pt < n_phase; ++pt) {
            const cxd et = std::exp(kJ * phase_vals[pt]);
            for (int ka = 0; ka < amp.size(); ++ka) {
              const cxd fr = amp.alpha_r[ka] * er;
              const cxd ft = amp.alpha_t[ka] * et;
              double nr2 = 0.0, nt2 = 0.0;
              for (int row = 0; row < rows_r; ++row) nr2 += std::norm(base_r(row) + fr * col_r(row));
              for (int row = 0; row < rows_t; ++row) nt2 += std::norm(base_t(row) + ft * col_t(row));
              const double metric =
                  detail::metric_from_snr(objective, nr2 / ev.sigma2, nt2 / ev.sigma2);
              if (metric > best_metric) {
                best_metric = metric;
                best_pr = pr;
                best_pt = pt;
                best_ka = ka;
              }
            }
          }
        }
        if (best_pr >= 0) {
          ris.theta_r(elem) = phase_vals[best_pr];
          ris.theta_t(elem) = phase_vals[best_pt];
          ris.alpha_r(elem) = amp.alpha_r[best_ka];
          ris.alpha_t(elem) = amp.alpha_t[best_ka];
          const cxd phi_r_new = ris.alpha_r(elem) * std::exp(kJ * ris.theta_r(elem));
          const cxd phi_t_new = ris.alpha_t(elem) * std::exp(kJ * ris.theta_t(elem));
          u_r = base_r + phi_r_new * col_r;
          u_t = base_t + phi_t_new * col_t;
        }
      }

      // Exact recompute sheds the incremental rounding before recording.
      const double obj_exact =
          ev.objective_of(phi_diagonal(ris, Side::r), phi_diagonal(ris, Side::t), w);
      cur_obj = std::max(cur_obj, obj_exact);
      guard_finite(cur_obj);
      result.trace.push_back(cur_obj);
    }

    result.iterations = iter + 1;
    const double denom = std::max(std::abs(obj_before), 1e-12);
    if ((cur_obj - obj_before) / denom < settings.rel_tol) break;
  }

  // Full power is never harmful for these objectives; pin the norm exactly.
  if (w.squaredNorm() > 0.0) w *= std::sqrt(cfg.p_t) / w.norm();
  w = canonicalize_w(w);
  const CVec phi_r = phi_diagonal(ris, Side::r);
  const CVec phi_t = phi_diagonal(ris, Side::t);
  const CVec t = ev.t_of(w);
  const double snr_r = ev.snr_of(ev.u_of(Side::r, phi_r, t));
  const double snr_t = ev.snr_of(ev.u_of(Side::t, phi_t, t));
  PrecodingSolution sol;
  sol.w = w;
  sol.ris = ris;
  sol.rate_r = std::log2(1.0 + snr_r);
  sol.rate_t = std::log2(1.0 + snr_t);
  sol.objective = detail::obj_from_snr(objective, snr_r, snr_t);
  cur_obj = std::max(cur_obj, sol.objective);
  result.trace.push_back(cur_obj);
  (void)m;
  result.solution = std::move(sol);
  check_power(result.solution.w, cfg.p_t);
  return result;
}

// Exact maximizer over a finite grid, for desk-scale verification.
// Per element both sides' phases come from a uniform phase grid and the
// amplitude split from amplitude_grid(amp_grid); the precoder is chosen from
// w_codebook oversampled-DFT beams plus one dominant-eigenvector candidate
// (computed at the all-ones codeword, mid amplitude split). The guard bounds
// the RIS grid (phase_grid^2 * amp_grid)^N; ties resolve to the earliest
// candidate in enumeration order (w outermost, then element digits with the
// last element fastest).
inline PrecodingSolution exhaustive_oracle(const ChannelRealization& ch, const SystemConfig& cfg,
                                           int phase_grid, int amp_grid, int w_codebook,
                                           const std::string& objective_name = "sum_rate") {
  const int n = cfg.ris_elements();
  const int m = cfg.m_bs;
  const BcdObjective objective = parse_objective(objective_name);
  detail::PairEvaluator ev(ch, cfg.sigma2_dl, cfg.p_t, objective);

  const AmplitudeGrid amp = amplitude_grid(amp_grid);
  const std::size_t q = static_cast<std::size_t>(phase_grid) * phase_grid * amp.size();
  double total = 1.0;
  for (int i = 0; i < n; ++i) total *= static_cast<double>(q);
  if (total > 1e7)
    throw DomainError("exhaustive_oracle: RIS grid has " + std::to_string(total) +
                      " points (limit 1e7); shrink the grids or N");

  // Candidate per-element coefficients, shared across elements.
  std::vector<cxd> phi_r_cand(q), phi_t_cand(q);
  {
    std::size_t idx = 0;
    for (int pr = 0; pr < phase_grid; ++pr) {
      const cxd er = std::exp(kJ * (2.0 * kPi * pr / phase_grid));
      for (int pt = 0; pt < phase_grid; ++pt) {
        const cxd et = std::exp(kJ * (2.0 * kPi * pt / phase_grid));
        for (int ka = 0; ka < amp.size(); ++ka) {
          phi_r_cand[idx] = amp.alpha_r[ka] * er;
          phi_t_cand[idx] = amp.alpha_t[ka] * et;
          ++idx;
        }
      }
    }
  }

  // w candidates: oversampled DFT beams + eigen candidate.
  std::vector<CVec> w_cands;
  for (int kw = 0; kw < w_codebook; ++kw) {
    CVec w(m);
    for (int mm = 0; mm < m; ++mm)
      w(mm) = std::exp(-kJ * (2.0 * kPi * kw * mm / std::max(w_codebook, 1))) / std::sqrt(double(m));
    w_cands.push_back(std::sqrt(cfg.p_t) * w);
  }
  {
    const int mid = (amp.size() - 1) / 2;
    const StarRisConfig flat = uniform_config(CVec::Ones(n), amp.alpha_r[mid], amp.alpha_t[mid]);
    w_cands.push_back(detail::eigen_precoder(ev, phi_diagonal(flat, Side::r),
                                             phi_diagonal(flat, Side::t)));
  }

  double best_metric = -std::numeric_limits<double>::infinity();
  CVec best_w;
  std::vector<std::size_t> best_digits(n, 0);

  const int n_r = static_cast<int>(ev.c_r.rows());
  const int n_t = static_cast<int>(ev.c_t.rows());
  std::vector<std::size_t> digits(n);
  // prefix[l][i] holds sum over elements < i for side l; vectors sized N_l.
  std::vector<CVec> prefix_r(n + 1), prefix_t(n + 1);

  for (const CVec& w : w_cands) {
    const CVec t = ev.t_of(w);
    // contrib[l](row, n*q + c) = phi_cand[c] * c_l(row, n) * t(n)
    CMat contrib_r(n_r, static_cast<Eigen::Index>(n) * q);
    CMat contrib_t(n_t, static_cast<Eigen::Index>(n) * q);
    for (int e = 0; e < n; ++e) {
      const CVec col_r = ev.c_r.col(e) * t(e);
      const CVec col_t = ev.c_t.col(e) * t(e);
      for (std::size_t c = 0; c < q; ++c) {
        contrib_r.col(static_cast<Eigen::Index>(e) * q + c) = phi_r_cand[c] * col_r;
        contrib_t.col(static_cast<Eigen::Index>(e) * q + c) = phi_t_cand[c] * col_t;
      }
    }

    std::fill(digits.begin(), digits.end(), 0);
    prefix_r[0] = CVec::Zero(n_r);
    prefix_t[0] = CVec::Zero(n_t);
    for (int i = 0; i < n; ++i) {
      prefix_r[i + 1] = prefix_r[i] + contrib_r.col(static_cast<Eigen::Index>(i) * q);
      prefix_t[i + 1] = prefix_t[i] + contrib_t.col(static_cast<Eigen::Index>(i) * q);
    }
    while (true) {
      const double metric = detail::metric_from_snr(objective, ev.snr_of(prefix_r[n]),
                                                    ev.snr_of(prefix_t[n]));
      if (metric > best_metric) {
        best_metric = metric;
        best_w = w;
        best_digits = digits;
      }
      int pos = n - 1;
      while (pos >= 0 && digits[pos] + 1 == q) {
        digits[pos] = 0;
        --pos;
      }
      if (pos < 0) break;
      ++digits[pos];
      for (int i = pos; i < n; ++i) {
        prefix_r[i + 1] = prefix_r[i] + contrib_r.col(static_cast<Eigen::Index>(i) * q + digits[i]);
        prefix_t[i + 1] = prefix_t[i] + contrib_t.col(static_cast<Eigen::Index>(i) * q + digits[i]);
      }
    }
  }

  // Decode the winning digits back into a config.
  StarRisConfig ris;
  ris.theta_r.resize(n);
  ris.theta_t.resize(n);
  ris.alpha_r.resize(n);
  ris.alpha_t.resize(n);
  for (int e = 0; e < n; ++e) {
    const std::size_t c = best_digits[e];
    const int ka = static_cast<int>(c % amp.size());
    const int pt = static_cast<int>((c / amp.size()) % phase_grid);
    const int pr = static_cast<int>(c / (amp.size() * phase_grid));
    ris.theta_r(e) = wrap_phase(2.0 * kPi * pr / phase_grid);
    ris.theta_t(e) = wrap_phase(2.0 * kPi * pt / phase_grid);
    ris.alpha_r(e) = amp.alpha_r[ka];
    ris.alpha_t(e) = amp.alpha_t[ka];
  }
  PrecodingSolution sol;
  sol.w = canonicalize_w(best_w);
  sol.ris = ris;
  sol.rate_r = rate(ch, ris, sol.w, Side::r, cfg.sigma2_dl);
  sol.rate_t = rate(ch, ris, sol.w, Side::t, cfg.sigma2_dl);
  sol.objective = objective == BcdObjective::sum_rate ? sol.rate_r + sol.rate_t
                                                      : std::min(sol.rate_r, sol.rate_t);
  check_power(sol.w, cfg.p_t);
  return sol;
}

// Random selection baseline: one uniformly drawn codeword (applied to both
// sides), one amplitude level for all elements, and an isotropic random
// precoder at full power.
inline PrecodingSolution random_baseline(const ChannelRealization& ch, const SystemConfig& cfg,
                                         const PhaseCodebook& codebook, const AmplitudeGrid& grid,
                                         std::uint64_t seed,
                                         const std::string& objective_name = "sum_rate") {
  const BcdObjective objective = parse_objective(objective_name);
  Rng rng(derive_seed(seed, 0x72616e64ULL));  // "rand"
  const int j = static_cast<int>(rng.uniform_index(codebook.size()));
  const int k = static_cast<int>(rng.uniform_index(grid.size()));
  CVec w(cfg.m_bs);
  for (int mm = 0; mm < cfg.m_bs; ++mm) w(mm) = rng.complex_gaussian(1.0);
  if (w.norm() == 0.0) w = CVec::Ones(cfg.m_bs);
  w *= std::sqrt(cfg.p_t) / w.norm();

  PrecodingSolution sol;
  sol.ris = uniform_config(codebook.codewords[j], grid.alpha_r[k], grid.alpha_t[k]);
  sol.w = canonicalize_w(w);
  sol.rate_r = rate(ch, sol.ris, sol.w, Side::r, cfg.sigma2_dl);
  sol.rate_t = rate(ch, sol.ris, sol.w, Side::t, cfg.sigma2_dl);
  sol.objective = objective == BcdObjective::sum_rate ? sol.rate_r + sol.rate_t
                                                      : std::min(sol.rate_r, sol.rate_t);
  return sol;
}

}  // namespace stargl

#endif  // STARGL_RATE_ORACLE_HPP_
