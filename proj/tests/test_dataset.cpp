#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "triad/dataset/loader.hpp"

using namespace triad;
using namespace triad::dataset;
namespace fs = std::filesystem;

namespace {

const std::string kCorpus = std::string(TRIAD_SOURCE_DIR) + "/data/mini_corpus";

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("triad_ds_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

void copy_example(const std::string& name, const fs::path& to) {
  fs::copy(fs::path(kCorpus) / name, to / name, fs::copy_options::recursive);
}

Instance find(const LoadedDataset& ds, const std::string& name) {
  for (const Instance& i : ds.instances)
    if (i.name == name) return i;
  FAIL("missing instance " + name);
  return {};
}

}  // namespace

TEST_CASE("the bundled corpus loads with 35 validated instances") {
  LoadedDataset ds = load_dataset(kCorpus);
  CHECK(ds.instances.size() == 35);
  CHECK(ds.warnings.empty());
  int ground_truth = 0;
  for (const Instance& inst : ds.instances) {
    CHECK(validate_instance(inst).empty());
    if (inst.variant == VariantLabel::C0_GroundTruth) ++ground_truth;
    CHECK(inst.io_tests.size() == 5);
  }
  CHECK(ground_truth == 7);
}

TEST_CASE("loading is idempotent and ordered by name") {
  LoadedDataset a = load_dataset(kCorpus);
  LoadedDataset b = load_dataset(kCorpus);
  REQUIRE(a.instances.size() == b.instances.size());
  for (std::size_t i = 0; i < a.instances.size(); ++i)
    CHECK(a.instances[i] == b.instances[i]);
  // Example blocks arrive sorted by example name.
  std::vector<std::string> bases;
  for (const Instance& inst : a.instances)
    if (inst.variant == VariantLabel::C0_GroundTruth) bases.push_back(inst.name);
  CHECK(std::is_sorted(bases.begin(), bases.end()));
}

TEST_CASE("variant directories may override only their category's files") {
  TempDir tmp;
  copy_example("max_array", tmp.path);
  // A docstring-only variant sneaking in a code change.
  std::ofstream(tmp.path / "max_array" / "C1" / "body.code") << "m := a[0];\n";
  try {
    load_dataset(tmp.path);
    FAIL("expected a load error");
  } catch (const LoadError& e) {
    CHECK(std::string(e.what()).find("C1 may not override body.code") != std::string::npos);
  }
}

TEST_CASE("stored outputs must match the instance's own code") {
  TempDir tmp;
  copy_example("abs_value", tmp.path);
  // Corrupt one expected output.
  fs::path tests = tmp.path / "abs_value" / "tests.json";
  std::string text;
  {
    std::ifstream in(tests);
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  auto pos = text.find("\"5\"");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 3, "\"6\"");
  std::ofstream(tests) << text;
  try {
    load_dataset(tmp.path);
    FAIL("expected a load error");
  } catch (const LoadError& e) {
    CHECK(std::string(e.what()).find("differs from recomputed") != std::string::npos);
  }
}

TEST_CASE("a stale template skeleton is a load error") {
  TempDir tmp;
  copy_example("clamp", tmp.path);
  std::ofstream(tmp.path / "clamp" / "template.skel") << "predicate wrong() { true }\n";
  CHECK_THROWS_AS(load_dataset(tmp.path), LoadError);
}

TEST_CASE("missing files and bad manifests are load errors naming the file") {
  TempDir tmp;
  copy_example("max_of_two", tmp.path);
  fs::remove(tmp.path / "max_of_two" / "post.spec");
  try {
    load_dataset(tmp.path);
    FAIL("expected a load error");
  } catch (const LoadError& e) {
    CHECK(std::string(e.what()).find("post.spec") != std::string::npos);
  }

  TempDir tmp2;
  copy_example("max_of_two", tmp2.path);
  std::ofstream(tmp2.path / "max_of_two" / "manifest.json") << "{\"schema_version\": 99}";
  CHECK_THROWS_AS(load_dataset(tmp2.path), LoadError);
}

TEST_CASE("unsupported variant categories are rejected at load time") {
  TempDir tmp;
  copy_example("max_of_two", tmp.path);
  fs::path manifest = tmp.path / "max_of_two" / "manifest.json";
  std::string text;
  {
    std::ifstream in(manifest);
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  auto pos = text.find("\"C6\"");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 4, "\"C4\"");
  std::ofstream(manifest) << text;
  CHECK_THROWS_AS(load_dataset(tmp.path), StructuralError);
}

TEST_CASE("write_example/load_example round-trips every field") {
  LoadedDataset ds = load_dataset(kCorpus);
  TempDir tmp;
  for (const char* name : {"max_array", "linear_search", "is_sorted"}) {
    Instance gt = find(ds, name);
    write_example(tmp.path / name, gt, {});
  }
  LoadedDataset again = load_dataset(tmp.path);
  REQUIRE(again.instances.size() == 3);
  for (const Instance& inst : again.instances) CHECK(inst == find(ds, inst.name));
}

TEST_CASE("variant round-trip preserves the override structure") {
  LoadedDataset ds = load_dataset(kCorpus);
  TempDir tmp;
  Instance gt = find(ds, "min_array");
  write_example(tmp.path / "min_array", gt, {"C1", "C2", "C3", "C6"});
  for (const char* v : {"::C1", "::C2", "::C3", "::C6"})
    write_variant(tmp.path / "min_array", gt, find(ds, std::string("min_array") + v));
  LoadedDataset again = load_dataset(tmp.path);
  REQUIRE(again.instances.size() == 5);
  for (const Instance& inst : again.instances) CHECK(inst == find(ds, inst.name));
}

TEST_CASE("external-language examples load with recomputation disabled and a warning") {
  TempDir tmp;
  fs::path dir = tmp.path / "outside";
  fs::create_directories(dir);
  std::ofstream(dir / "manifest.json") << R"json({
    "schema_version": 1, "name": "outside", "language": "external",
    "signature": "method outside(a: array<int>) returns (m: int)",
    "variants": []
  })json";
  std::ofstream(dir / "docstring.txt") << "Finds the maximal element.\n";
  std::ofstream(dir / "pre.spec") << "a.Length >= 1\n";
  std::ofstream(dir / "post.spec") << "forall k :: 0 <= k < a.Length ==> m >= a[k]\n";
  std::ofstream(dir / "body.code") << "m := a[0]; // opaque foreign text\n";
  // Outputs that no local evaluator could produce: they must load untouched.
  std::ofstream(dir / "tests.json")
      << R"({"tests": [{"inputs": [[1, 2, 3]], "expected_output": "3"}]})";
  std::ofstream(dir / "template.skel") << "predicate pre_original(...) // foreign\n";

  LoadedDataset ds = load_dataset(tmp.path);
  REQUIRE(ds.instances.size() == 1);
  CHECK(ds.instances[0].language_tag == LanguageTag::External);
  CHECK(ds.instances[0].preconditions == std::vector<std::string>{"a.Length >= 1"});
  REQUIRE(ds.warnings.size() == 1);
  CHECK(ds.warnings[0].find("recomputation disabled") != std::string::npos);
}

TEST_CASE("audit passes the bundled corpus") {
  LoadedDataset ds = load_dataset(kCorpus);
  CHECK(audit_variants(ds.instances, minilang::InputGrid{}).empty());
}

TEST_CASE("audit flags a no-op C1 variant") {
  LoadedDataset ds = load_dataset(kCorpus);
  std::vector<Instance> instances;
  Instance gt = find(ds, "abs_value");
  Instance fake = gt;
  fake.name = "abs_value::C1";
  fake.variant = VariantLabel::C1;  // docstring identical to ground truth
  instances.push_back(gt);
  instances.push_back(fake);
  auto failures = audit_variants(instances, minilang::InputGrid{});
  REQUIRE_FALSE(failures.empty());
  CHECK(failures.front().find("docstring must differ") != std::string::npos);
}

TEST_CASE("audit flags a variant that fails the soundness gate") {
  LoadedDataset ds = load_dataset(kCorpus);
  Instance gt = find(ds, "max_of_two");
  Instance bad = gt;
  bad.name = "max_of_two::C2";
  bad.variant = VariantLabel::C2;
  bad.postconditions = {"m == x + y"};  // the code does not satisfy this
  auto failures = audit_variants({gt, bad}, minilang::InputGrid{});
  REQUIRE_FALSE(failures.empty());
  bool found = false;
  for (const std::string& f : failures)
    found = found || f.find("soundness gate") != std::string::npos;
  CHECK(found);
}
