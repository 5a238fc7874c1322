#pragma once

#include <random>
#include <string>

#include "triad/analytical/world.hpp"
#include "triad/backends/task.hpp"

namespace triad::backends {

// Draws from a transfer distribution instead of calling a model: the source
// element x is located by name inside the task context, a target element is
// sampled from M(x, .), and the text returned is the label of its
// equivalence class. Together with the exact-match docstring oracle this
// realizes the single-edge check, accepting exactly on class agreement.
class SamplerBackend : public Backend {
 public:
  explicit SamplerBackend(analytical::WorldBundle<double> bundle)
      : bundle_(std::move(bundle)) {}

  std::string name() const override { return "sampler"; }

  std::string generate(const GenerationTask& task, std::uint64_t attempt_seed) override {
    int x = locate_source(task.context);
    const auto& row = bundle_.model.rows[static_cast<std::size_t>(x)];
    double total = 0.0;
    for (double p : row) total += p;
    std::mt19937_64 rng(attempt_seed);
    double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * total;
    double acc = 0.0;
    std::size_t y = row.size() - 1;
    for (std::size_t i = 0; i < row.size(); ++i) {
      acc += row[i];
      if (u < acc) {
        y = i;
        break;
      }
    }
    return bundle_.world.b_class_names[bundle_.world.b_class[y]];
  }

  const analytical::WorldBundle<double>& bundle() const { return bundle_; }

 private:
  analytical::WorldBundle<double> bundle_;

  static bool token_present(const std::string& text, const std::string& word) {
    auto is_word = [](char c) {
      return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    };
    std::size_t pos = 0;
    while ((pos = text.find(word, pos)) != std::string::npos) {
      bool left_ok = pos == 0 || !is_word(text[pos - 1]);
      std::size_t end = pos + word.size();
      bool right_ok = end >= text.size() || !is_word(text[end]);
      if (left_ok && right_ok) return true;
      pos += 1;
    }
    return false;
  }

  // Exactly one A-element name must occur (as a whole token) in the context;
  // the backend has no other way to know which distribution row to draw from.
  int locate_source(const std::string& context) const {
    int found = -1;
    for (std::size_t i = 0; i < bundle_.world.a_size(); ++i) {
      if (!token_present(context, bundle_.world.a_names[i])) continue;
      if (found >= 0)
        throw BackendFailure("sampler: context names more than one source element");
      found = static_cast<int>(i);
    }
    if (found < 0) throw BackendFailure("sampler: context names no source element");
    return found;
  }
};

}  // namespace triad::backends
