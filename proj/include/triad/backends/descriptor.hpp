#pragma once

#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <variant>

#include "triad/backends/http.hpp"
#include "triad/backends/sampler.hpp"
#include "triad/backends/scripted.hpp"

namespace triad::backends {

// Backend selection as data. Scripted and Sampler are fully deterministic
// given the seeds the engine derives; Http talks to a live service.
struct ScriptedDescriptor {
  std::string fixture_path;
};

struct SamplerDescriptor {
  std::string world_path;
};

using BackendDescriptor = std::variant<ScriptedDescriptor, SamplerDescriptor, HttpBackendConfig>;

inline std::unique_ptr<Backend> make_backend(const BackendDescriptor& d) {
  if (const auto* s = std::get_if<ScriptedDescriptor>(&d)) {
    if (s->fixture_path.empty())
      throw StructuralError("scripted backend requires a fixture path");
    return std::make_unique<ScriptedBackend>(ScriptedBackend::from_file(s->fixture_path));
  }
  if (const auto* s = std::get_if<SamplerDescriptor>(&d)) {
    if (s->world_path.empty()) throw StructuralError("sampler backend requires a world file");
    std::ifstream in(s->world_path);
    if (!in.good()) throw StructuralError("cannot open world file: " + s->world_path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return std::make_unique<SamplerBackend>(
        analytical::to_double_bundle(analytical::load_world_text<analytical::Rational>(ss.str())));
  }
  return std::make_unique<HttpBackend>(std::get<HttpBackendConfig>(d));
}

}  // namespace triad::backends
