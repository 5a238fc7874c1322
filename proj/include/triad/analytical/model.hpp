#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "triad/analytical/world.hpp"
#include "triad/util/hash.hpp"

namespace triad::analytical {

struct NotTransferRational : StructuralError {
  using StructuralError::StructuralError;
};

// Probability of transferring x into a given target class: the sum of the
// model row over the class members.
template <typename P>
P class_mass(const TransferModel<P>& m, const FiniteWorld<P>& w, int x, int b_cls) {
  if (x < 0 || static_cast<std::size_t>(x) >= w.a_size())
    throw StructuralError("class_mass: unknown source element");
  if (b_cls < 0 || b_cls >= w.b_class_count())
    throw StructuralError("class_mass: unknown target class");
  P total(0);
  for (std::size_t y = 0; y < w.b_size(); ++y)
    if (w.b_class[y] == b_cls) total += m.rows[x][y];
  return total;
}

template <typename P>
P class_mass(const TransferModel<P>& m, const FiniteWorld<P>& w, const std::string& x,
             const std::string& b_class_label) {
  return class_mass(m, w, w.a_index(x), w.b_class_index(b_class_label));
}

// The unique class maximizing the class mass at x. Ties mean the model is not
// transfer-rational and the transfer function is undefined.
template <typename P>
int transfer_function(const TransferModel<P>& m, const FiniteWorld<P>& w, int x) {
  int best = 0;
  P best_mass = class_mass(m, w, x, 0);
  bool tie = false;
  for (int c = 1; c < w.b_class_count(); ++c) {
    P cm = class_mass(m, w, x, c);
    if (cm > best_mass) {
      best = c;
      best_mass = cm;
      tie = false;
    } else if (cm == best_mass) {
      tie = true;
    }
  }
  if (tie)
    throw NotTransferRational("transfer_function: tie for the maximal class at " + w.a_names[x]);
  return best;
}

struct TransferRationality {
  bool ok = true;
  std::string offending_x;  // witness when !ok
};

template <typename P>
TransferRationality is_transfer_rational(const TransferModel<P>& m, const FiniteWorld<P>& w) {
  for (std::size_t x = 0; x < w.a_size(); ++x) {
    try {
      transfer_function(m, w, static_cast<int>(x));
    } catch (const NotTransferRational&) {
      return {false, w.a_names[x]};
    }
  }
  return {};
}

// A probability together with a flag marking a conditional whose conditioning
// event had no mass; by convention such values report 1.
template <typename P>
struct ProbValue {
  P value{1};
  bool vacuous = false;
};

template <typename P>
struct AssumptionParams {
  P l{}, u{};
  ProbValue<P> c1, c0;      // alignment with G / with its complement
  ProbValue<P> p_c1, p_c2;  // the two concentration clauses, measured separately
};

namespace detail {

// E[f | cond] under the joint distribution; vacuous if the condition has no mass.
template <typename P, typename CondFn, typename ValFn>
ProbValue<P> conditional_expectation(const FiniteWorld<P>& w, CondFn&& cond, ValFn&& val) {
  P num(0), den(0);
  for (std::size_t x = 0; x < w.a_size(); ++x)
    for (std::size_t y = 0; y < w.b_size(); ++y) {
      if (w.joint[x][y] == P(0) || !cond(x, y)) continue;
      den += w.joint[x][y];
      num += w.joint[x][y] * val(x, y);
    }
  if (den == P(0)) return {P(1), true};
  return {num / den, false};
}

template <typename P>
std::vector<int> transfer_map(const TransferModel<P>& m, const FiniteWorld<P>& w) {
  std::vector<int> f(w.a_size());
  for (std::size_t x = 0; x < w.a_size(); ++x)
    f[x] = transfer_function(m, w, static_cast<int>(x));  // throws on ties
  return f;
}

}  // namespace detail

template <typename P>
struct Alignment {
  ProbValue<P> c1, c0;
};

// Assumption parameters c1/c0: probability that y lands in the transfer class
// of x, conditioned on consistency and on inconsistency respectively.
template <typename P>
Alignment<P> estimate_alignment(const FiniteWorld<P>& w, const TransferModel<P>& m) {
  std::vector<int> f = detail::transfer_map(m, w);
  auto aligned = [&](std::size_t x, std::size_t y) {
    return P(w.b_class[y] == f[x] ? 1 : 0);
  };
  Alignment<P> out;
  out.c1 = detail::conditional_expectation(
      w, [&](std::size_t x, std::size_t y) { return w.in_g[x][y]; }, aligned);
  out.c0 = detail::conditional_expectation(
      w, [&](std::size_t x, std::size_t y) { return !w.in_g[x][y]; }, aligned);
  return out;
}

template <typename P>
struct Concentration {
  ProbValue<P> p_c1, p_c2;
};

// The two concentration clauses: mass of the top class is at least l on
// consistent-and-aligned pairs; the best non-top class stays below u on
// inconsistent-and-unaligned pairs.
template <typename P>
Concentration<P> concentration_params(const FiniteWorld<P>& w, const TransferModel<P>& m,
                                      const P& l, const P& u) {
  if (!(l > P(0)) || l > P(1)) throw StructuralError("concentration: l must be in (0, 1]");
  if (u < P(0) || !(u < P(1))) throw StructuralError("concentration: u must be in [0, 1)");
  std::vector<int> f = detail::transfer_map(m, w);

  auto top_mass = [&](std::size_t x) { return class_mass(m, w, static_cast<int>(x), f[x]); };
  auto best_nontop = [&](std::size_t x) {
    P best(0);
    for (int c = 0; c < w.b_class_count(); ++c) {
      if (c == f[x]) continue;
      P cm = class_mass(m, w, static_cast<int>(x), c);
      if (cm > best) best = cm;
    }
    return best;
  };

  Concentration<P> out;
  out.p_c1 = detail::conditional_expectation(
      w,
      [&](std::size_t x, std::size_t y) { return w.in_g[x][y] && w.b_class[y] == f[x]; },
      [&](std::size_t x, std::size_t) { return P(top_mass(x) >= l ? 1 : 0); });
  out.p_c2 = detail::conditional_expectation(
      w,
      [&](std::size_t x, std::size_t y) { return !w.in_g[x][y] && w.b_class[y] != f[x]; },
      [&](std::size_t x, std::size_t) { return P(best_nontop(x) <= u ? 1 : 0); });
  return out;
}

template <typename P>
struct Bounds {
  P a_lower{}, r_upper{};
};

// The acceptance bounds: A >= l*p_c*c1 on consistent pairs and
// R <= u*p_c*(1-c0) + (1-p_c)*(1-c0) + c0 on inconsistent ones, with the
// clause-specific concentration probabilities in their respective places.
template <typename P>
Bounds<P> theorem_bounds(const AssumptionParams<P>& p) {
  for (const auto* v : {&p.c1, &p.c0, &p.p_c1, &p.p_c2})
    if (v->value < P(0) || v->value > P(1))
      throw StructuralError("theorem_bounds: probabilities must be in [0, 1]");
  Bounds<P> b;
  b.a_lower = p.l * p.p_c1.value * p.c1.value;
  b.r_upper = p.u * p.p_c2.value * (P(1) - p.c0.value) +
              (P(1) - p.p_c2.value) * (P(1) - p.c0.value) + p.c0.value;
  return b;
}

template <typename P>
AssumptionParams<P> measure_params(const FiniteWorld<P>& w, const TransferModel<P>& m,
                                   const P& l, const P& u) {
  AssumptionParams<P> p;
  p.l = l;
  p.u = u;
  Alignment<P> a = estimate_alignment(w, m);
  p.c1 = a.c1;
  p.c0 = a.c0;
  Concentration<P> c = concentration_params(w, m, l, u);
  p.p_c1 = c.p_c1;
  p.p_c2 = c.p_c2;
  return p;
}

template <typename P>
struct AcceptProb {
  ProbValue<P> given_g, given_not_g;
};

// Exact acceptance probability of the single-edge check: draw y' from M(x,.),
// accept iff y' lands in the class of y. The acceptance chance at (x, y) is
// therefore the class mass of [y], averaged under D conditioned each way.
template <typename P>
AcceptProb<P> exact_accept_prob(const FiniteWorld<P>& w, const TransferModel<P>& m) {
  auto mass_of_target = [&](std::size_t x, std::size_t y) {
    return class_mass(m, w, static_cast<int>(x), w.b_class[y]);
  };
  AcceptProb<P> out;
  out.given_g = detail::conditional_expectation(
      w, [&](std::size_t x, std::size_t y) { return w.in_g[x][y]; }, mass_of_target);
  out.given_not_g = detail::conditional_expectation(
      w, [&](std::size_t x, std::size_t y) { return !w.in_g[x][y]; }, mass_of_target);
  return out;
}

struct MonteCarloEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
  bool vacuous = false;  // stratum had no mass; estimate omitted
};

struct MonteCarloResult {
  MonteCarloEstimate given_g, given_not_g;
  std::uint64_t trials = 0;
};

namespace detail {

// Fixed-width uniform double in [0, 1); not std::uniform_real_distribution,
// whose output is implementation-defined.
inline double next_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::size_t sample_index(const std::vector<double>& cumulative, double total,
                                std::mt19937_64& rng) {
  double u = next_unit(rng) * total;
  for (std::size_t i = 0; i < cumulative.size(); ++i)
    if (u < cumulative[i]) return i;
  return cumulative.size() - 1;
}

}  // namespace detail

// Stratified Monte Carlo: per stratum (consistent / inconsistent), sample
// (x, y) from D restricted to the stratum, then y' from M(x,.), and count
// class hits. Deterministic for a fixed seed.
inline MonteCarloResult monte_carlo_accept(const FiniteWorld<double>& w,
                                           const TransferModel<double>& m,
                                           std::uint64_t n_trials, std::uint64_t seed) {
  if (n_trials < 1) throw StructuralError("monte_carlo_accept: n_trials must be >= 1");
  MonteCarloResult out;
  out.trials = n_trials;

  std::vector<std::vector<double>> row_cum(w.a_size());
  std::vector<double> row_total(w.a_size(), 0.0);
  for (std::size_t x = 0; x < w.a_size(); ++x) {
    double acc = 0.0;
    for (std::size_t y = 0; y < w.b_size(); ++y) {
      acc += m.rows[x][y];
      row_cum[x].push_back(acc);
    }
    row_total[x] = acc;
  }

  auto run_stratum = [&](bool want_g, std::uint64_t stratum_seed) {
    std::vector<std::pair<std::size_t, std::size_t>> support;
    std::vector<double> cum;
    double total = 0.0;
    for (std::size_t x = 0; x < w.a_size(); ++x)
      for (std::size_t y = 0; y < w.b_size(); ++y) {
        if (w.joint[x][y] <= 0.0 || w.in_g[x][y] != want_g) continue;
        support.push_back({x, y});
        total += w.joint[x][y];
        cum.push_back(total);
      }
    MonteCarloEstimate e;
    if (support.empty()) {
      e.vacuous = true;
      return e;
    }
    std::mt19937_64 rng(stratum_seed);
    std::uint64_t hits = 0;
    for (std::uint64_t t = 0; t < n_trials; ++t) {
      auto [x, y] = support[detail::sample_index(cum, total, rng)];
      std::size_t yp = detail::sample_index(row_cum[x], row_total[x], rng);
      if (w.b_class[yp] == w.b_class[y]) ++hits;
    }
    e.estimate = static_cast<double>(hits) / static_cast<double>(n_trials);
    e.standard_error =
        std::sqrt(e.estimate * (1.0 - e.estimate) / static_cast<double>(n_trials));
    return e;
  };

  out.given_g = run_stratum(true, splitmix64(seed ^ 0x47617465ULL));
  out.given_not_g = run_stratum(false, splitmix64(seed ^ 0x4e6f7447ULL));
  return out;
}

// Acceptance probability after k independent repetitions where any single
// success accepts.
template <typename P>
P k_amplified(const P& p, int k) {
  if (p < P(0) || p > P(1)) throw StructuralError("k_amplified: p must be in [0, 1]");
  if (k < 1) throw StructuralError("k_amplified: k must be >= 1");
  P miss(1);
  for (int i = 0; i < k; ++i) miss *= (P(1) - p);
  return P(1) - miss;
}

}  // namespace triad::analytical
