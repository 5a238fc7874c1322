#pragma once

#include <algorithm>
#include <numeric>
#include <random>

#include "triad/analytical/model.hpp"

namespace triad::analytical {

// Randomized exact worlds for property tests. G is built as a partial
// injective matching between equivalence classes, which satisfies both
// linking properties by construction; rows are drawn as small rationals and
// re-rolled until the class-mass argmax is unique at every x.
struct RandomWorldOptions {
  int max_classes = 3;       // per domain
  int max_class_size = 2;    // elements per class
  int weight_scale = 12;     // integer weights in [0, weight_scale]
  double match_prob = 0.75;  // chance an A class gets a G partner
};

template <typename P = Rational>
struct RandomWorld {
  WorldBundle<P> bundle;
  P l{}, u{};
};

namespace detail {

inline int rand_int(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

}  // namespace detail

template <typename P = Rational>
RandomWorld<P> generate_random_world(std::uint64_t seed, RandomWorldOptions opt = {}) {
  std::mt19937_64 rng(splitmix64(seed));
  RandomWorld<P> out;
  FiniteWorld<P>& w = out.bundle.world;

  auto build_domain = [&](char prefix, std::vector<std::string>& names,
                          std::vector<int>& classes, std::vector<std::string>& class_names) {
    int n_cls = detail::rand_int(rng, 1, opt.max_classes);
    for (int c = 0; c < n_cls; ++c) {
      class_names.push_back(std::string(1, prefix) + "cls" + std::to_string(c));
      int sz = detail::rand_int(rng, 1, opt.max_class_size);
      for (int e = 0; e < sz; ++e) {
        names.push_back(std::string(1, prefix) + std::to_string(names.size()));
        classes.push_back(c);
      }
    }
  };
  build_domain('a', w.a_names, w.a_class, w.a_class_names);
  build_domain('b', w.b_names, w.b_class, w.b_class_names);

  // Partial injective class matching for G.
  int na_cls = static_cast<int>(w.a_class_names.size());
  int nb_cls = static_cast<int>(w.b_class_names.size());
  std::vector<int> b_perm(nb_cls);
  std::iota(b_perm.begin(), b_perm.end(), 0);
  std::shuffle(b_perm.begin(), b_perm.end(), rng);
  std::vector<int> match(na_cls, -1);
  int used = 0;
  for (int c = 0; c < na_cls && used < nb_cls; ++c)
    if (detail::rand_int(rng, 0, 99) < static_cast<int>(opt.match_prob * 100))
      match[c] = b_perm[used++];
  w.in_g.assign(w.a_size(), std::vector<bool>(w.b_size(), false));
  for (std::size_t x = 0; x < w.a_size(); ++x)
    for (std::size_t y = 0; y < w.b_size(); ++y)
      w.in_g[x][y] = match[w.a_class[x]] == w.b_class[y];

  // Joint distribution: random integer weights over a random support, with at
  // least one consistent pair (when any exists) and one inconsistent pair
  // kept in support so neither stratum is trivially empty.
  std::vector<std::vector<int>> weights(w.a_size(), std::vector<int>(w.b_size(), 0));
  int wsum = 0;
  for (std::size_t x = 0; x < w.a_size(); ++x)
    for (std::size_t y = 0; y < w.b_size(); ++y) {
      if (detail::rand_int(rng, 0, 2) == 0) continue;
      weights[x][y] = detail::rand_int(rng, 1, opt.weight_scale);
      wsum += weights[x][y];
    }
  auto ensure_support = [&](bool want_g) {
    for (std::size_t x = 0; x < w.a_size(); ++x)
      for (std::size_t y = 0; y < w.b_size(); ++y)
        if (w.in_g[x][y] == want_g) {
          if (weights[x][y] == 0) {
            weights[x][y] = detail::rand_int(rng, 1, opt.weight_scale);
            wsum += weights[x][y];
          }
          return;
        }
  };
  ensure_support(true);
  ensure_support(false);
  w.joint.assign(w.a_size(), std::vector<P>(w.b_size(), P(0)));
  for (std::size_t x = 0; x < w.a_size(); ++x)
    for (std::size_t y = 0; y < w.b_size(); ++y)
      if (weights[x][y] > 0) w.joint[x][y] = P(weights[x][y]) / P(wsum);

  // Transfer rows, re-rolled per x until the top class is unique.
  TransferModel<P>& m = out.bundle.model;
  m.rows.assign(w.a_size(), std::vector<P>(w.b_size(), P(0)));
  for (std::size_t x = 0; x < w.a_size(); ++x) {
    for (int attempt = 0;; ++attempt) {
      std::vector<int> rw(w.b_size());
      int total = 0;
      for (std::size_t y = 0; y < w.b_size(); ++y) {
        rw[y] = detail::rand_int(rng, 0, opt.weight_scale);
        total += rw[y];
      }
      if (total == 0) continue;
      std::vector<int> class_sums(nb_cls, 0);
      for (std::size_t y = 0; y < w.b_size(); ++y) class_sums[w.b_class[y]] += rw[y];
      std::sort(class_sums.rbegin(), class_sums.rend());
      bool unique_top = nb_cls == 1 || class_sums[0] > class_sums[1];
      if (!unique_top && attempt < 64) continue;
      if (!unique_top) {  // force uniqueness rather than loop forever
        for (std::size_t y = 0; y < w.b_size(); ++y)
          if (w.b_class[y] == 0) {
            rw[y] += 1;
            ++total;
            break;
          }
      }
      for (std::size_t y = 0; y < w.b_size(); ++y) m.rows[x][y] = P(rw[y]) / P(total);
      break;
    }
  }
  if (!is_transfer_rational(m, w).ok)  // the +1 nudge above can still tie; re-seed
    return generate_random_world<P>(splitmix64(seed + 0x9e37), opt);

  out.l = P(detail::rand_int(rng, 1, 20)) / P(20);
  out.u = P(detail::rand_int(rng, 0, 19)) / P(20);
  return out;
}

}  // namespace triad::analytical
