#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "triad/minilang/eval.hpp"
#include "triad/minilang/format.hpp"

namespace triad::minilang {

struct IntRange {
  Int lo = -2, hi = 2;  // inclusive
};

struct ArrayShape {
  Int len_lo = 0, len_hi = 3;
  IntRange elem{-2, 2};
};

// Finite input domain for bounded-exhaustive checking. Enumeration order is
// lexicographic: parameters left to right, integers ascending, arrays by
// length then elementwise ascending. The order is part of the contract —
// "first counterexample" results are stable across runs.
struct InputGrid {
  IntRange default_int{-2, 2};
  ArrayShape default_array{};
  std::map<std::string, IntRange> int_overrides;
  std::map<std::string, ArrayShape> array_overrides;
  std::size_t cap = 200'000;

  IntRange int_range(const std::string& name) const {
    auto it = int_overrides.find(name);
    return it == int_overrides.end() ? default_int : it->second;
  }
  ArrayShape array_shape(const std::string& name) const {
    auto it = array_overrides.find(name);
    return it == array_overrides.end() ? default_array : it->second;
  }
};

namespace detail {

class GridAxis {
 public:
  GridAxis(IntRange r) : is_array_(false), int_range_(r) {
    count_ = static_cast<unsigned long long>(r.hi - r.lo + 1);
  }
  GridAxis(ArrayShape s) : is_array_(true), shape_(s) {
    if (s.len_lo < 0 || s.len_hi < s.len_lo || s.elem.hi < s.elem.lo)
      throw StructuralError("grid: malformed array shape");
    unsigned long long elems = static_cast<unsigned long long>(s.elem.hi - s.elem.lo + 1);
    unsigned long long len_count = 1;  // elems^len, starting at len_lo
    cum_.clear();
    count_ = 0;
    auto grow = [&](unsigned long long v) {
      if (v > (1ULL << 62) / elems) throw StructuralError("grid: axis size overflow");
      return v * elems;
    };
    for (Int len = 0; len < s.len_lo; ++len) len_count = grow(len_count);
    for (Int len = s.len_lo; len <= s.len_hi; ++len) {
      cum_.push_back(count_);
      count_ += len_count;
      if (count_ > (1ULL << 62)) throw StructuralError("grid: axis size overflow");
      len_count = grow(len_count);
    }
  }

  unsigned long long count() const { return count_; }

  Value value(unsigned long long idx) const {
    if (!is_array_) return static_cast<Int>(int_range_.lo + static_cast<Int>(idx));
    // Locate the length block, then decode digits most-significant-first.
    std::size_t block = cum_.size() - 1;
    while (cum_[block] > idx) --block;
    Int len = shape_.len_lo + static_cast<Int>(block);
    unsigned long long rest = idx - cum_[block];
    unsigned long long elems = static_cast<unsigned long long>(shape_.elem.hi - shape_.elem.lo + 1);
    std::vector<Int> xs(static_cast<std::size_t>(len));
    for (Int i = len - 1; i >= 0; --i) {
      xs[static_cast<std::size_t>(i)] = shape_.elem.lo + static_cast<Int>(rest % elems);
      rest /= elems;
    }
    return xs;
  }

 private:
  bool is_array_;
  IntRange int_range_{};
  ArrayShape shape_{};
  unsigned long long count_ = 0;
  std::vector<unsigned long long> cum_;
};

inline std::vector<GridAxis> axes_for(const std::vector<Param>& params, const InputGrid& grid) {
  std::vector<GridAxis> axes;
  for (const Param& p : params) {
    if (p.type == SemType::Int) axes.emplace_back(grid.int_range(p.name));
    else axes.emplace_back(grid.array_shape(p.name));
  }
  return axes;
}

inline unsigned long long total_points(const std::vector<GridAxis>& axes) {
  unsigned long long total = 1;
  for (const GridAxis& a : axes) {
    if (a.count() == 0) return 0;
    if (total > (1ULL << 62) / a.count()) throw StructuralError("grid: size overflow");
    total *= a.count();
  }
  return total;
}

// Calls fn(point) for every grid point in lexicographic order (first
// parameter most significant); stops early when fn returns false.
template <typename Fn>
void for_each_point(const std::vector<GridAxis>& axes, Fn&& fn) {
  std::vector<unsigned long long> idx(axes.size(), 0);
  std::vector<Value> point(axes.size());
  if (axes.empty()) {
    fn(point);
    return;
  }
  for (std::size_t i = 0; i < axes.size(); ++i) {
    if (axes[i].count() == 0) return;
    point[i] = axes[i].value(0);
  }
  while (true) {
    if (!fn(point)) return;
    std::size_t i = axes.size();
    while (i > 0) {
      --i;
      if (++idx[i] < axes[i].count()) {
        point[i] = axes[i].value(idx[i]);
        break;
      }
      idx[i] = 0;
      point[i] = axes[i].value(0);
      if (i == 0) return;
    }
  }
}

// A clause evaluating to a fault counts as unsatisfied: a precondition that
// cannot even be evaluated at a point excludes that point.
inline bool clauses_hold(const std::vector<ExprPtr>& clauses,
                         const std::map<std::string, Value>& env,
                         const std::map<std::string, Value>& olds) {
  for (const ExprPtr& c : clauses) {
    auto r = eval_spec(c, env, olds);
    if (const bool* b = std::get_if<bool>(&r)) {
      if (!*b) return false;
    } else {
      return false;
    }
  }
  return true;
}

}  // namespace detail

struct Counterexample {
  std::vector<Value> inputs;
  std::string reason;
};

// Bounded-exhaustive verification: the program satisfies the specification on
// every grid point whose precondition holds, or the lexicographically first
// counterexample is returned. Sound with respect to the grid only.
inline std::optional<Counterexample> bounded_verify(const MiniProgram& prog, const MiniSpec& spec,
                                                    const InputGrid& grid,
                                                    long long fuel = kDefaultFuel) {
  auto axes = detail::axes_for(prog.signature.params, grid);
  if (detail::total_points(axes) > grid.cap)
    throw StructuralError("grid cap exceeded for bounded_verify");
  std::optional<Counterexample> cex;
  detail::for_each_point(axes, [&](const std::vector<Value>& point) {
    std::map<std::string, Value> env;
    for (std::size_t i = 0; i < point.size(); ++i)
      env[prog.signature.params[i].name] = point[i];
    if (!detail::clauses_hold(spec.pre, env, env)) return true;  // point excluded
    EvalOutcome out = evaluate(prog, point, fuel);
    if (const RuntimeFault* f = std::get_if<RuntimeFault>(&out)) {
      cex = Counterexample{point, render_fault(*f)};
      return false;
    }
    const auto& vals = std::get<std::vector<Value>>(out);
    std::map<std::string, Value> post_env = env;
    for (std::size_t i = 0; i < prog.signature.returns.size(); ++i)
      post_env[prog.signature.returns[i].name] = vals[i];
    for (std::size_t ci = 0; ci < spec.post.size(); ++ci) {
      auto r = eval_spec(spec.post[ci], post_env, env, fuel);
      const bool* b = std::get_if<bool>(&r);
      if (!b) {
        cex = Counterexample{point, "postcondition " + std::to_string(ci + 1) +
                                        " evaluation fault: " +
                                        render_fault(std::get<RuntimeFault>(r))};
        return false;
      }
      if (!*b) {
        cex = Counterexample{point, "postcondition " + std::to_string(ci + 1) + " violated"};
        return false;
      }
    }
    return true;
  });
  return cex;
}

struct Distinguisher {
  enum class Pair { Pre, Post };
  std::vector<Value> point;  // parameter values, then return values for Post
  Pair pair = Pair::Pre;
  std::string direction;
};

// Grid equivalence of two specifications over one signature: preconditions
// must agree everywhere; postconditions must agree wherever the (common)
// precondition holds, with return values ranging over the grid as free
// variables. A clause that faults at a point counts as false there.
inline std::optional<Distinguisher> spec_equivalent(const FunctionSignature& sig,
                                                    const MiniSpec& s1, const MiniSpec& s2,
                                                    const InputGrid& grid) {
  auto param_axes = detail::axes_for(sig.params, grid);
  auto return_axes = detail::axes_for(sig.returns, grid);
  unsigned long long pt = detail::total_points(param_axes);
  unsigned long long rt = detail::total_points(return_axes);
  if (pt > grid.cap || (rt > 1 && pt > grid.cap / rt))
    throw StructuralError("grid cap exceeded for spec_equivalent");

  std::optional<Distinguisher> diff;
  detail::for_each_point(param_axes, [&](const std::vector<Value>& params) {
    std::map<std::string, Value> env;
    for (std::size_t i = 0; i < params.size(); ++i) env[sig.params[i].name] = params[i];
    bool p1 = detail::clauses_hold(s1.pre, env, env);
    bool p2 = detail::clauses_hold(s2.pre, env, env);
    if (p1 != p2) {
      diff = Distinguisher{params, Distinguisher::Pair::Pre,
                           p1 ? "left precondition holds, right does not"
                              : "right precondition holds, left does not"};
      return false;
    }
    if (!p1) return true;  // point outside the common domain
    detail::for_each_point(return_axes, [&](const std::vector<Value>& rets) {
      std::map<std::string, Value> full = env;
      for (std::size_t i = 0; i < rets.size(); ++i) full[sig.returns[i].name] = rets[i];
      bool q1 = detail::clauses_hold(s1.post, full, env);
      bool q2 = detail::clauses_hold(s2.post, full, env);
      if (q1 != q2) {
        std::vector<Value> point = params;
        point.insert(point.end(), rets.begin(), rets.end());
        diff = Distinguisher{std::move(point), Distinguisher::Pair::Post,
                             q1 ? "left postcondition holds, right does not"
                                : "right postcondition holds, left does not"};
        return false;
      }
      return true;
    });
    return !diff.has_value();
  });
  return diff;
}

struct Mismatch {
  std::size_t index = 0;
  std::string got, want;
};

// Replays the recorded I/O tests in order; the first disagreement (or fault,
// rendered as such) is reported.
inline std::optional<Mismatch> run_io_tests(const MiniProgram& prog,
                                            const std::vector<IOTest>& tests,
                                            long long fuel = kDefaultFuel) {
  if (tests.empty()) throw StructuralError("run_io_tests: tests must be nonempty");
  for (std::size_t i = 0; i < tests.size(); ++i) {
    EvalOutcome out = evaluate(prog, tests[i].inputs, fuel);
    std::string got = std::holds_alternative<RuntimeFault>(out)
                          ? render_fault(std::get<RuntimeFault>(out))
                          : render_outputs(std::get<std::vector<Value>>(out));
    if (got != tests[i].expected_output) return Mismatch{i, got, tests[i].expected_output};
  }
  return std::nullopt;
}

}  // namespace triad::minilang
