#pragma once

#include <unistd.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <regex>
#include <string>
#include <vector>

#include "triad/backends/task.hpp"
#include "triad/minilang/compile.hpp"
#include "triad/minilang/verify.hpp"
#include "triad/util/strings.hpp"

namespace triad::backends {

enum class VerifyStatus { Verified, Rejected, Timeout, Unknown };

inline const char* to_string(VerifyStatus s) {
  switch (s) {
    case VerifyStatus::Verified: return "Verified";
    case VerifyStatus::Rejected: return "Rejected";
    case VerifyStatus::Timeout: return "Timeout";
    case VerifyStatus::Unknown: return "Unknown";
  }
  return "?";
}

struct VerifyOutcome {
  VerifyStatus status = VerifyStatus::Unknown;
  std::string diagnostics;
};

// Adapter over whatever proves code against annotations: the bundled
// bounded-exhaustive verifier, or an external prover run as a subprocess.
class VerifierAdapter {
 public:
  virtual ~VerifierAdapter() = default;
  virtual std::string name() const = 0;
  // `source` is a complete annotated method text.
  virtual VerifyOutcome verify(const std::string& source) = 0;
};

class MiniLangAdapter : public VerifierAdapter {
 public:
  explicit MiniLangAdapter(minilang::InputGrid grid) : grid_(std::move(grid)) {}

  std::string name() const override { return "minilang"; }

  VerifyOutcome verify(const std::string& source) override {
    auto compiled = minilang::compile_method(source);
    if (!compiled.ok()) return {VerifyStatus::Rejected, compiled.render()};
    minilang::MiniProgram prog{compiled.value->signature, compiled.value->body};
    auto cex = minilang::bounded_verify(prog, compiled.value->spec, grid_);
    if (!cex) return {VerifyStatus::Verified, ""};
    return {VerifyStatus::Rejected,
            "counterexample at inputs " + minilang::render_outputs(cex->inputs) + ": " +
                cex->reason};
  }

  const minilang::InputGrid& grid() const { return grid_; }

 private:
  minilang::InputGrid grid_;
};

// First matching rule classifies the subprocess output; with no match, the
// exit status decides (0 verified, otherwise rejected).
struct OutputParseRule {
  std::string pattern;  // ECMAScript regex applied to combined stdout/stderr
  VerifyStatus status = VerifyStatus::Rejected;
};

struct ExternalProcessConfig {
  // Command template; {file} is replaced by the temp source path and
  // {timeout_s} by the timeout in seconds. Run through /bin/sh.
  std::string command;
  std::vector<OutputParseRule> parse_rules;
  std::chrono::seconds timeout{60};
  bool keep_temp_files = false;  // debug aid
  std::string temp_suffix = ".src";
};

class ExternalProcessAdapter : public VerifierAdapter {
 public:
  explicit ExternalProcessAdapter(ExternalProcessConfig cfg) : cfg_(std::move(cfg)) {
    if (cfg_.command.empty())
      throw StructuralError("external verifier: command template is required");
  }

  std::string name() const override { return "external"; }

  VerifyOutcome verify(const std::string& source) override {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path();
    fs::path file = dir / ("triad_verify_" + std::to_string(::getpid()) + "_" +
                           std::to_string(counter_++) + cfg_.temp_suffix);
    {
      std::ofstream out(file);
      out << source;
    }
    std::string cmd = replace_all(cfg_.command, "{file}", file.string());
    cmd = replace_all(cmd, "{timeout_s}", std::to_string(cfg_.timeout.count()));
    // `timeout` turns a hung prover into exit code 124.
    std::string full = "timeout " + std::to_string(cfg_.timeout.count()) + "s " + cmd + " 2>&1";

    std::string output;
    int exit_code = run_capture(full, output);
    if (!cfg_.keep_temp_files) {
      std::error_code ec;
      fs::remove(file, ec);
    }
    if (exit_code == 127)
      throw BackendFailure("external verifier: command not found: " + cmd);
    if (exit_code == 124) return {VerifyStatus::Timeout, output};
    for (const OutputParseRule& rule : cfg_.parse_rules)
      if (std::regex_search(output, std::regex(rule.pattern)))
        return {rule.status, output};
    return {exit_code == 0 ? VerifyStatus::Verified : VerifyStatus::Rejected, output};
  }

 private:
  ExternalProcessConfig cfg_;
  unsigned counter_ = 0;

  static int run_capture(const std::string& cmd, std::string& output) {
    std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(cmd.c_str(), "r"), pclose);
    if (!pipe) throw BackendFailure("external verifier: failed to spawn shell");
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe.get())) > 0) output.append(buf.data(), n);
    int status = pclose(pipe.release());
    if (status < 0) throw BackendFailure("external verifier: wait failed");
    return WIFEXITED(status) ? WEXITSTATUS(status) : 128;
  }
};

}  // namespace triad::backends
