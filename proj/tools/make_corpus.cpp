// Regenerates the bundled example corpus and its scripted fixture file.
//
//   make_corpus [corpus_dir] [fixtures_file]
//
// Every expected test output is computed by running the reference body
// through the evaluator, template skeletons come from the template renderer,
// and the finished tree is reloaded, audited, and run end to end against the
// generated fixtures before the tool reports success.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "triad/backends/scripted.hpp"
#include "triad/dataset/loader.hpp"
#include "triad/engine/engine.hpp"

using namespace triad;
namespace fs = std::filesystem;

namespace {

struct Family {
  std::string name;
  std::string signature;
  std::string doc, doc_c1, doc_weak;
  std::vector<std::string> pre, post;
  std::vector<std::string> pre_weak, post_weak;
  std::vector<std::string> pre_c6, post_c6;
  std::string body, body_c6;
  std::vector<std::vector<Value>> test_inputs;

  // Faithful-reconstruction snippets for the scripted backend. "alt" texts
  // are semantically equivalent to the originals but textually distinct, so
  // the equivalence checkers do real work.
  std::string anno_alt, anno_of_c1_doc, anno_of_weak_doc;
  std::string code_alt, code_of_weak, code_of_c1_doc, code_of_c6;
  std::string doc_of_orig_annos, doc_of_orig_code, doc_of_weak, doc_of_c6;
};

std::vector<Int> ints(std::initializer_list<Int> xs) { return xs; }

std::vector<Family> make_families() {
  std::vector<Family> fams;

  {
    Family f;
    f.name = "max_array";
    f.signature = "method max_array(a: array<int>) returns (m: int)";
    f.doc = "Returns the maximum value m present in the array a.";
    f.doc_c1 = "Returns the minimum value m present in the array a.";
    f.doc_weak = "Returns a value m that is greater than or equal to every element of the array a.";
    f.pre = {"len(a) >= 1"};
    f.post = {"forall k in 0 .. len(a) :: m >= a[k]",
              "exists k in 0 .. len(a) :: m == a[k]"};
    f.pre_weak = f.pre;
    f.post_weak = {"forall k in 0 .. len(a) :: m >= a[k]"};
    f.pre_c6 = f.pre;
    f.post_c6 = {"forall k in 0 .. len(a) :: m <= a[k]",
                 "exists k in 0 .. len(a) :: m == a[k]"};
    f.body = R"(m := a[0];
var i := 1;
while (i < len(a))
  bound len(a) - i
  invariant 1 <= i && i <= len(a)
  invariant forall k in 0 .. i :: m >= a[k]
  invariant exists k in 0 .. i :: m == a[k]
{
  if (a[i] > m) { m := a[i]; }
  i := i + 1;
}
)";
    f.body_c6 = R"(m := a[0];
var i := 1;
while (i < len(a))
  bound len(a) - i
  invariant 1 <= i && i <= len(a)
  invariant forall k in 0 .. i :: m <= a[k]
  invariant exists k in 0 .. i :: m == a[k]
{
  if (a[i] < m) { m := a[i]; }
  i := i + 1;
}
)";
    f.test_inputs = {{ints({1, 2, 3, 4, 5})},
                     {ints({-1, -2, -3, -4, -5})},
                     {ints({0, 0, 0})},
                     {ints({5, 10})},
                     {ints({99})}};
    f.anno_alt = "requires 1 <= len(a)\n"
                 "ensures exists j in 0 .. len(a) :: a[j] == m\n"
                 "ensures forall j in 0 .. len(a) :: a[j] <= m\n";
    f.anno_of_c1_doc = "requires len(a) >= 1\n"
                       "ensures forall k in 0 .. len(a) :: m <= a[k]\n"
                       "ensures exists k in 0 .. len(a) :: m == a[k]\n";
    f.anno_of_weak_doc = "requires 1 <= len(a)\n"
                         "ensures forall j in 0 .. len(a) :: a[j] <= m\n";
    f.code_alt = R"(var i := 0;
m := a[0];
while (i < len(a))
  bound len(a) - i
{
  if (a[i] > m) { m := a[i]; }
  i := i + 1;
}
)";
    f.code_of_weak = R"(m := a[0];
var i := 1;
while (i < len(a))
  bound len(a) - i
{
  if (a[i] > m) { m := a[i]; }
  i := i + 1;
}
m := m + 1;
)";
    f.code_of_c1_doc = f.body_c6;
    f.code_of_c6 = R"(var i := 0;
m := a[0];
while (i < len(a))
  bound len(a) - i
{
  if (a[i] < m) { m := a[i]; }
  i := i + 1;
}
)";
    f.doc_of_orig_annos = "returns the maximum value, m, present in the array a";
    f.doc_of_orig_code = "Returns the maximum value m present in the array a";
    f.doc_of_weak =
        "returns a value m that is greater than or equal to every element of the array a";
    f.doc_of_c6 = "Returns the minimum value m present in the array a.";
    fams.push_back(std::move(f));
  }

  {
    Family f;
    f.name = "min_array";
    f.signature = "method min_array(a: array<int>) returns (m: int)";
    f.doc = "Returns the minimum value m present in the array a.";
    f.doc_c1 = "Returns the index m of the minimum element of the array a.";
    f.doc_weak = "Returns a value m that is less than or equal to every element of the array a.";
    f.pre = {"len(a) >= 1"};
    f.post = {"forall k in 0 .. len(a) :: m <= a[k]",
              "exists k in 0 .. len(a) :: m == a[k]"};
    f.pre_weak = f.pre;
    f.post_weak = {"forall k in 0 .. len(a) :: m <= a[k]"};
    f.pre_c6 = f.pre;
    f.post_c6 = {"forall k in 0 .. len(a) :: m >= a[k]",
                 "exists k in 0 .. len(a) :: m == a[k]"};
    f.body = R"(m := a[0];
var i := 1;
while (i < len(a))
  bound len(a) - i
  invariant 1 <= i && i <= len(a)
  invariant forall k in 0 .. i :: m <= a[k]
  invariant exists k in 0 .. i :: m == a[k]
{
  if (a[i] < m) { m := a[i]; }
  i := i + 1;
}
)";
    f.body_c6 = R"(m := a[0];
var i := 1;
while (i < len(a))
  bound len(a) - i
  invariant 1 <= i && i <= len(a)
  invariant forall k in 0 .. i :: m >= a[k]
  invariant exists k in 0 .. i :: m == a[k]
{
  if (a[i] > m) { m := a[i]; }
  i := i + 1;
}
)";
    f.test_inputs = {{ints({3, 1, 2})},
                     {ints({-5, 5})},
                     {ints({7})},
                     {ints({0, -1, -2, -3})},
                     {ints({2, 2, 2})}};
    f.anno_alt = "requires 1 <= len(a)\n"
                 "ensures exists j in 0 .. len(a) :: a[j] == m\n"
                 "ensures forall j in 0 .. len(a) :: a[j] >= m\n";
    f.anno_of_c1_doc = "requires len(a) >= 1\n"
                       "ensures 0 <= m && m < len(a)\n"
                       "ensures forall k in 0 .. len(a) :: a[m] <= a[k]\n";
    f.anno_of_weak_doc = "requires 1 <= len(a)\n"
                         "ensures forall j in 0 .. len(a) :: a[j] >= m\n";
    f.code_alt = R"(var i := 0;
m := a[0];
while (i < len(a))
  bound len(a) - i
{
  if (a[i] < m) { m := a[i]; }
  i := i + 1;
}
)";
    f.code_of_weak = R"(m := a[0];
var i := 1;
while (i < len(a))
  bound len(a) - i
{
  if (a[i] < m) { m := a[i]; }
  i := i + 1;
}
m := m - 1;
)";
    f.code_of_c1_doc = R"(m := 0;
var i := 1;
while (i < len(a))
  bound len(a) - i
{
  if (a[i] < a[m]) { m := i; }
  i := i + 1;
}
)";
    f.code_of_c6 = R"(var i := 0;
m := a[0];
while (i < len(a))
  bound len(a) - i
{
  if (a[i] > m) { m := a[i]; }
  i := i + 1;
}
)";
    f.doc_of_orig_annos = "returns the minimum value, m, present in the array a";
    f.doc_of_orig_code = "Returns the minimum value m present in the array a";
    f.doc_of_weak =
        "returns a value m that is less than or equal to every element of the array a";
    f.doc_of_c6 = "Returns the maximum value m present in the array a.";
    fams.push_back(std::move(f));
  }

  {
    Family f;
    f.name = "linear_search";
    f.signature = "method linear_search(a: array<int>, key: int) returns (idx: int)";
    f.doc = "Returns the index idx of the first occurrence of key in the array a, or -1 if key "
            "does not occur.";
    f.doc_c1 = "Returns the index idx of the last occurrence of key in the array a, or -1 if key "
               "does not occur.";
    f.doc_weak = "Returns an index idx such that a[idx] equals key, or -1 if key does not occur "
                 "in the array a.";
    f.pre = {};
    f.post = {"idx == -1 || (0 <= idx && idx < len(a))",
              "idx == -1 ==> (forall k in 0 .. len(a) :: a[k] != key)",
              "idx != -1 ==> (a[idx] == key && (forall k in 0 .. idx :: a[k] != key))"};
    f.pre_weak = {};
    f.post_weak = {"idx == -1 || (0 <= idx && idx < len(a))",
                   "idx == -1 ==> (forall k in 0 .. len(a) :: a[k] != key)",
                   "idx != -1 ==> a[idx] == key"};
    f.pre_c6 = {};
    f.post_c6 = {"idx == -1 || (0 <= idx && idx < len(a))",
                 "idx == -1 ==> (forall k in 0 .. len(a) :: a[k] != key)",
                 "idx != -1 ==> (a[idx] == key && (forall k in idx + 1 .. len(a) :: a[k] != key))"};
    f.body = R"(idx := -1;
var i := 0;
while (i < len(a))
  bound len(a) - i
  invariant 0 <= i && i <= len(a)
  invariant idx == -1 ==> (forall k in 0 .. i :: a[k] != key)
  invariant idx != -1 ==> (a[idx] == key && (forall k in 0 .. idx :: a[k] != key))
{
  if (a[i] == key) {
    if (idx == -1) { idx := i; }
  }
  i := i + 1;
}
)";
    f.body_c6 = R"(idx := -1;
var i := 0;
while (i < len(a))
  bound len(a) - i
  invariant 0 <= i && i <= len(a)
  invariant idx == -1 ==> (forall k in 0 .. i :: a[k] != key)
  invariant idx != -1 ==> (a[idx] == key && (forall k in idx + 1 .. i :: a[k] != key))
{
  if (a[i] == key) { idx := i; }
  i := i + 1;
}
)";
    f.test_inputs = {{ints({2, 7, 7}), Int{7}},
                     {ints({1, 2, 3}), Int{4}},
                     {ints({}), Int{0}},
                     {ints({5}), Int{5}},
                     {ints({3, 3, 3}), Int{3}}};
    f.anno_alt =
        "ensures idx != -1 ==> (a[idx] == key && (forall t in 0 .. idx :: a[t] != key))\n"
        "ensures idx == -1 ==> (forall t in 0 .. len(a) :: a[t] != key)\n"
        "ensures (0 <= idx && idx < len(a)) || idx == -1\n";
    f.anno_of_c1_doc =
        "ensures idx == -1 || (0 <= idx && idx < len(a))\n"
        "ensures idx == -1 ==> (forall k in 0 .. len(a) :: a[k] != key)\n"
        "ensures idx != -1 ==> (a[idx] == key && (forall k in idx + 1 .. len(a) :: a[k] != key))\n";
    f.anno_of_weak_doc =
        "ensures (0 <= idx && idx < len(a)) || idx == -1\n"
        "ensures idx == -1 ==> (forall t in 0 .. len(a) :: a[t] != key)\n"
        "ensures idx != -1 ==> a[idx] == key\n";
    f.code_alt = R"(idx := -1;
var i := len(a);
while (i > 0)
  bound i
{
  i := i - 1;
  if (a[i] == key) { idx := i; }
}
)";
    f.code_of_weak = R"(idx := -1;
var i := 0;
while (i < len(a))
  bound len(a) - i
{
  if (a[i] == key) { idx := i; }
  i := i + 1;
}
)";
    f.code_of_c1_doc = f.code_of_weak;
    f.code_of_c6 = R"(idx := -1;
var i := len(a);
while (i > 0)
  bound i
{
  i := i - 1;
  if (a[i] == key) {
    if (idx == -1) { idx := i; }
  }
}
)";
    f.doc_of_orig_annos = "returns the index idx of the first occurrence of key in the array a, "
                          "or -1 if key does not occur";
    f.doc_of_orig_code = "Returns the index idx of the first occurrence of key in the array a; "
                         "or -1 if key does not occur.";
    f.doc_of_weak = "returns an index idx such that a[idx] equals key, or -1 if key does not "
                    "occur in the array a";
    f.doc_of_c6 = "Returns the index idx of the last occurrence of key in the array a, or -1 if "
                  "key does not occur.";
    fams.push_back(std::move(f));
  }

  {
    Family f;
    f.name = "abs_value";
    f.signature = "method abs_value(x: int) returns (r: int)";
    f.doc = "Returns the absolute value r of the integer x.";
    f.doc_c1 = "Returns the negation r of the integer x.";
    f.doc_weak = "Returns a nonnegative value r that equals x whenever x is nonnegative.";
    f.pre = {};
    f.post = {"r >= 0", "x >= 0 ==> r == x", "x < 0 ==> r == -x"};
    f.pre_weak = {};
    f.post_weak = {"r >= 0", "x >= 0 ==> r == x"};
    f.pre_c6 = {};
    f.post_c6 = {"r == x * x", "r >= 0"};
    f.body = R"(if (x < 0) { r := -x; } else { r := x; }
)";
    f.body_c6 = R"(r := x * x;
)";
    f.test_inputs = {{Int{5}}, {Int{-5}}, {Int{0}}, {Int{-1}}, {Int{2}}};
    f.anno_alt = "ensures x >= 0 ==> r == x\n"
                 "ensures x < 0 ==> r == 0 - x\n"
                 "ensures r >= 0\n";
    f.anno_of_c1_doc = "ensures r == -x\n";
    f.anno_of_weak_doc = "ensures x >= 0 ==> r == x\nensures r >= 0\n";
    f.code_alt = R"(r := x;
if (r < 0) { r := 0 - r; }
)";
    f.code_of_weak = R"(if (x >= 0) { r := x; } else { r := 0; }
)";
    f.code_of_c1_doc = R"(r := 0 - x;
)";
    f.code_of_c6 = R"(var y := x;
if (y < 0) { y := 0 - y; }
r := y * y;
)";
    f.doc_of_orig_annos = "returns the absolute value, r, of the integer x";
    f.doc_of_orig_code = "Returns the absolute value r of the integer x";
    f.doc_of_weak = "returns a nonnegative value r that equals x whenever x is nonnegative";
    f.doc_of_c6 = "Returns the square r of the integer x.";
    fams.push_back(std::move(f));
  }

  {
    Family f;
    f.name = "clamp";
    f.signature = "method clamp(x: int, lo: int, hi: int) returns (r: int)";
    f.doc = "Returns x clamped to the inclusive range lo to hi: r is lo when x is below lo, hi "
            "when x is above hi, and x otherwise.";
    f.doc_c1 = "Returns hi when x is below lo, lo when x is above hi, and x otherwise.";
    f.doc_weak = "Returns lo when x is below lo, hi when x is above hi, and some value otherwise.";
    f.pre = {"lo <= hi"};
    f.post = {"x < lo ==> r == lo", "x > hi ==> r == hi", "lo <= x && x <= hi ==> r == x"};
    f.pre_weak = f.pre;
    f.post_weak = {"x < lo ==> r == lo", "x > hi ==> r == hi"};
    f.pre_c6 = f.pre;
    f.post_c6 = {"x < lo ==> r == hi", "x > hi ==> r == lo", "lo <= x && x <= hi ==> r == x"};
    f.body = R"(if (x < lo) { r := lo; } else {
  if (x > hi) { r := hi; } else { r := x; }
}
)";
    f.body_c6 = R"(if (x < lo) { r := hi; } else {
  if (x > hi) { r := lo; } else { r := x; }
}
)";
    f.test_inputs = {{Int{5}, Int{0}, Int{10}},
                     {Int{-3}, Int{0}, Int{10}},
                     {Int{15}, Int{0}, Int{10}},
                     {Int{7}, Int{7}, Int{7}},
                     {Int{0}, Int{-2}, Int{2}}};
    f.anno_alt = "requires hi >= lo\n"
                 "ensures lo <= x && x <= hi ==> r == x\n"
                 "ensures x > hi ==> r == hi\n"
                 "ensures x < lo ==> r == lo\n";
    f.anno_of_c1_doc = "requires lo <= hi\n"
                       "ensures x < lo ==> r == hi\n"
                       "ensures x > hi ==> r == lo\n"
                       "ensures lo <= x && x <= hi ==> r == x\n";
    f.anno_of_weak_doc = "requires hi >= lo\n"
                         "ensures x < lo ==> r == lo\n"
                         "ensures x > hi ==> r == hi\n";
    f.code_alt = R"(if (x > hi) { r := hi; } else {
  if (x < lo) { r := lo; } else { r := x; }
}
)";
    f.code_of_weak = R"(if (x < lo) { r := lo; } else {
  if (x > hi) { r := hi; } else { r := lo; }
}
)";
    f.code_of_c1_doc = R"(if (x < lo) { r := hi; } else {
  if (x > hi) { r := lo; } else { r := x; }
}
)";
    f.code_of_c6 = R"(if (x > hi) { r := lo; } else {
  if (x < lo) { r := hi; } else { r := x; }
}
)";
    f.doc_of_orig_annos = "returns x clamped to the inclusive range lo to hi; r is lo when x is "
                          "below lo, hi when x is above hi, and x otherwise";
    f.doc_of_orig_code = "Returns x clamped to the inclusive range lo to hi: r is lo when x is "
                         "below lo hi when x is above hi and x otherwise";
    f.doc_of_weak = "returns lo when x is below lo, hi when x is above hi, and some value "
                    "otherwise";
    f.doc_of_c6 = "Returns hi when x is below lo, lo when x is above hi, and x otherwise.";
    fams.push_back(std::move(f));
  }

  {
    Family f;
    f.name = "is_sorted";
    f.signature = "method is_sorted(a: array<int>) returns (b: int)";
    f.doc = "Returns flag b which is 1 when the array a is sorted in non-decreasing order and 0 "
            "otherwise.";
    f.doc_c1 = "Returns flag b which is 1 when the array a is sorted in strictly increasing "
               "order and 0 otherwise.";
    f.doc_weak = "Returns flag b which is 0 or 1; whenever b is 1 the array a is sorted in "
                 "non-decreasing order.";
    f.pre = {};
    f.post = {"b == 0 || b == 1",
              "b == 1 <==> (forall k in 0 .. len(a) - 1 :: a[k] <= a[k + 1])"};
    f.pre_weak = {};
    f.post_weak = {"b == 0 || b == 1",
                   "b == 1 ==> (forall k in 0 .. len(a) - 1 :: a[k] <= a[k + 1])"};
    f.pre_c6 = {};
    f.post_c6 = {"b == 0 || b == 1",
                 "b == 0 <==> (forall k in 0 .. len(a) - 1 :: a[k] <= a[k + 1])"};
    f.body = R"(b := 1;
var i := 0;
while (i < len(a) - 1)
  bound len(a) - i
  invariant 0 <= i
  invariant b == 0 || b == 1
  invariant b == 1 <==> (forall k in 0 .. i :: a[k] <= a[k + 1])
{
  if (a[i] > a[i + 1]) { b := 0; }
  i := i + 1;
}
)";
    f.body_c6 = R"(b := 0;
var i := 0;
while (i < len(a) - 1)
  bound len(a) - i
  invariant 0 <= i
  invariant b == 0 || b == 1
  invariant b == 0 <==> (forall k in 0 .. i :: a[k] <= a[k + 1])
{
  if (a[i] > a[i + 1]) { b := 1; }
  i := i + 1;
}
)";
    f.test_inputs = {{ints({1, 2, 2, 3})},
                     {ints({3, 1})},
                     {ints({})},
                     {ints({5})},
                     {ints({2, 2, 1})}};
    f.anno_alt = "ensures b == 1 || b == 0\n"
                 "ensures b == 1 <==> (forall j in 0 .. len(a) - 1 :: a[j + 1] >= a[j])\n";
    f.anno_of_c1_doc = "ensures b == 0 || b == 1\n"
                       "ensures b == 1 <==> (forall k in 0 .. len(a) - 1 :: a[k] < a[k + 1])\n";
    f.anno_of_weak_doc = "ensures b == 1 || b == 0\n"
                         "ensures b == 1 ==> (forall j in 0 .. len(a) - 1 :: a[j] <= a[j + 1])\n";
    f.code_alt = R"(b := 1;
var i := len(a) - 1;
while (i > 0)
  bound i
{
  if (a[i - 1] > a[i]) { b := 0; }
  i := i - 1;
}
)";
    f.code_of_weak = R"(b := 0;
)";
    f.code_of_c1_doc = R"(b := 1;
var i := 0;
while (i < len(a) - 1)
  bound len(a) - i
{
  if (a[i] >= a[i + 1]) { b := 0; }
  i := i + 1;
}
)";
    f.code_of_c6 = R"(b := 0;
var i := len(a) - 1;
while (i > 0)
  bound i
{
  if (a[i - 1] > a[i]) { b := 1; }
  i := i - 1;
}
)";
    f.doc_of_orig_annos = "returns flag b which is 1 when the array a is sorted in "
                          "non-decreasing order and 0 otherwise";
    f.doc_of_orig_code = "Returns flag b which is 1 when the array a is sorted in non-decreasing "
                         "order, and 0 otherwise.";
    f.doc_of_weak = "returns flag b which is 0 or 1; whenever b is 1 the array a is sorted in "
                    "non-decreasing order";
    f.doc_of_c6 = "Returns flag b which is 1 when the array a is not sorted in non-decreasing "
                  "order and 0 otherwise.";
    fams.push_back(std::move(f));
  }

  {
    Family f;
    f.name = "max_of_two";
    f.signature = "method max_of_two(x: int, y: int) returns (m: int)";
    f.doc = "Returns the larger value m of the two integers x and y.";
    f.doc_c1 = "Returns the smaller value m of the two integers x and y.";
    f.doc_weak = "Returns a value m that is at least as large as both integers x and y.";
    f.pre = {};
    f.post = {"m >= x", "m >= y", "m == x || m == y"};
    f.pre_weak = {};
    f.post_weak = {"m >= x", "m >= y"};
    f.pre_c6 = {};
    f.post_c6 = {"m <= x", "m <= y", "m == x || m == y"};
    f.body = R"(if (x >= y) { m := x; } else { m := y; }
)";
    f.body_c6 = R"(if (x <= y) { m := x; } else { m := y; }
)";
    f.test_inputs = {{Int{3}, Int{7}},
                     {Int{7}, Int{3}},
                     {Int{-2}, Int{-5}},
                     {Int{4}, Int{4}},
                     {Int{0}, Int{-1}}};
    f.anno_alt = "ensures m == x || m == y\nensures x <= m\nensures y <= m\n";
    f.anno_of_c1_doc = "ensures m <= x\nensures m <= y\nensures m == x || m == y\n";
    f.anno_of_weak_doc = "ensures x <= m\nensures y <= m\n";
    f.code_alt = R"(m := y;
if (x > m) { m := x; }
)";
    f.code_of_weak = R"(if (x >= y) { m := x + 1; } else { m := y + 1; }
)";
    f.code_of_c1_doc = R"(if (x <= y) { m := x; } else { m := y; }
)";
    f.code_of_c6 = R"(m := y;
if (x < m) { m := x; }
)";
    f.doc_of_orig_annos = "returns the larger value, m, of the two integers x and y";
    f.doc_of_orig_code = "Returns the larger value m of the two integers x and y";
    f.doc_of_weak = "returns a value m that is at least as large as both integers x and y";
    f.doc_of_c6 = "Returns the smaller value m of the two integers x and y.";
    fams.push_back(std::move(f));
  }

  return fams;
}

std::vector<IOTest> run_reference(const FunctionSignature& sig, const std::string& body,
                                  const std::vector<std::vector<Value>>& inputs) {
  auto compiled = minilang::compile_body(sig, body);
  if (!compiled.ok())
    throw StructuralError("reference body does not compile: " + compiled.render());
  minilang::MiniProgram prog{sig, *compiled.value};
  std::vector<IOTest> tests;
  for (const auto& in : inputs) {
    auto out = minilang::evaluate(prog, in);
    if (std::holds_alternative<minilang::RuntimeFault>(out))
      throw StructuralError("reference body faulted on a test input");
    tests.push_back({in, minilang::render_outputs(std::get<std::vector<Value>>(out))});
  }
  return tests;
}

Instance make_instance(const Family& f, VariantLabel v) {
  Instance inst;
  inst.signature = minilang::parse_signature(f.signature);
  inst.variant = v;
  inst.name = v == VariantLabel::C0_GroundTruth
                  ? f.name
                  : f.name + "::" + to_string(v);
  inst.docstring = f.doc;
  inst.preconditions = f.pre;
  inst.postconditions = f.post;
  inst.code_body = f.body;
  switch (v) {
    case VariantLabel::C0_GroundTruth: break;
    case VariantLabel::C1: inst.docstring = f.doc_c1; break;
    case VariantLabel::C2:
      inst.preconditions = f.pre_weak;
      inst.postconditions = f.post_weak;
      break;
    case VariantLabel::C3:
      inst.preconditions = f.pre_weak;
      inst.postconditions = f.post_weak;
      inst.docstring = f.doc_weak;
      break;
    case VariantLabel::C6:
      inst.preconditions = f.pre_c6;
      inst.postconditions = f.post_c6;
      inst.code_body = f.body_c6;
      break;
  }
  inst.io_tests = run_reference(inst.signature, inst.code_body, f.test_inputs);
  inst.template_skeleton = equivalence::render_template_skeleton(
      inst.signature, inst.preconditions, inst.postconditions);
  return inst;
}

void add_fixtures(nlohmann::json& instances, const Family& f, const Instance& inst) {
  using backends::TaskKind;
  std::string d2a, a2c, d2c, a2d, c2d;
  switch (inst.variant) {
    case VariantLabel::C0_GroundTruth:
      d2a = f.anno_alt;
      a2c = f.code_alt;
      d2c = f.code_alt;
      a2d = f.doc_of_orig_annos;
      c2d = f.doc_of_orig_code;
      break;
    case VariantLabel::C1:
      d2a = f.anno_of_c1_doc;
      a2c = f.code_alt;
      d2c = f.code_of_c1_doc;
      a2d = f.doc_of_orig_annos;
      c2d = f.doc_of_orig_code;
      break;
    case VariantLabel::C2:
      d2a = f.anno_alt;
      a2c = f.code_of_weak;
      d2c = f.code_alt;
      a2d = f.doc_of_weak;
      c2d = f.doc_of_orig_code;
      break;
    case VariantLabel::C3:
      d2a = f.anno_of_weak_doc;
      a2c = f.code_of_weak;
      d2c = f.code_of_weak;
      a2d = f.doc_of_weak;
      c2d = f.doc_of_orig_code;
      break;
    case VariantLabel::C6:
      d2a = f.anno_alt;
      a2c = f.code_of_c6;
      d2c = f.code_alt;
      a2d = f.doc_of_c6;
      c2d = f.doc_of_c6;
      break;
  }
  nlohmann::json& e = instances[inst.name];
  e[to_string(TaskKind::AnnotationsFromDocstring)] = {d2a};
  e[to_string(TaskKind::CodeFromAnnotations)] = {a2c};
  e[to_string(TaskKind::CodeFromDocstring)] = {d2c};
  // Docstring edges sample up to m candidates; a consistent generator keeps
  // giving its best answer.
  e[to_string(TaskKind::DocstringFromAnnotations)] = {a2d, a2d, a2d};
  e[to_string(TaskKind::DocstringFromCode)] = {c2d, c2d, c2d};
}

}  // namespace

int main(int argc, char** argv) {
  fs::path corpus_dir = argc > 1 ? argv[1] : "data/mini_corpus";
  fs::path fixtures_file = argc > 2 ? argv[2] : "data/fixtures/consistent.json";

  try {
    std::vector<Family> fams = make_families();
    nlohmann::json fixture_instances = nlohmann::json::object();

    fs::remove_all(corpus_dir);
    for (const Family& f : fams) {
      Instance gt = make_instance(f, VariantLabel::C0_GroundTruth);
      std::vector<Instance> variants;
      for (VariantLabel v :
           {VariantLabel::C1, VariantLabel::C2, VariantLabel::C3, VariantLabel::C6})
        variants.push_back(make_instance(f, v));

      dataset::write_example(corpus_dir / f.name, gt, {"C1", "C2", "C3", "C6"});
      for (const Instance& v : variants) dataset::write_variant(corpus_dir / f.name, gt, v);

      add_fixtures(fixture_instances, f, gt);
      for (const Instance& v : variants) add_fixtures(fixture_instances, f, v);
    }

    nlohmann::json fixtures;
    fixtures["schema_version"] = backends::kFixtureSchemaVersion;
    fixtures["instances"] = fixture_instances;
    fs::create_directories(fixtures_file.parent_path());
    std::ofstream(fixtures_file) << fixtures.dump(2) << "\n";

    // Self-check: reload, audit, and run the engine end to end.
    dataset::LoadedDataset loaded = dataset::load_dataset(corpus_dir);
    minilang::InputGrid grid;
    auto audit = dataset::audit_variants(loaded.instances, grid);
    for (const std::string& a : audit) std::cerr << "audit: " << a << "\n";
    if (!audit.empty()) return 1;

    backends::ScriptedBackend scripted = backends::ScriptedBackend::from_file(fixtures_file);
    backends::MiniLangAdapter adapter(grid);
    engine::EngineBackends eb;
    eb.generator = &scripted;
    eb.verifier = &adapter;
    EngineConfig cfg;
    cfg.seed = 7;

    int bad = 0;
    for (const Instance& inst : loaded.instances) {
      ConsistencyVerdict v = engine::run_all(inst, cfg, eb);
      bool want_accept = inst.variant == VariantLabel::C0_GroundTruth;
      bool sound = v.result(CheckKind::AnnoSound).accepted;
      if (v.overall_accept != want_accept || !sound) {
        ++bad;
        std::cerr << inst.name << ": overall=" << v.overall_accept
                  << " want=" << want_accept << " anno-sound=" << sound << "\n";
        for (CheckKind k : kAllCheckKinds) {
          const CheckResult& r = v.result(k);
          std::cerr << "  " << to_string(k) << ": " << (r.accepted ? "accept" : "reject");
          if (r.failure_reason) std::cerr << " (" << to_string(*r.failure_reason) << ")";
          if (!r.accepted && !r.transcripts.empty())
            std::cerr << " -- " << r.transcripts.back().feedback;
          std::cerr << "\n";
        }
      }
    }
    if (bad) {
      std::cerr << bad << " instances off contract\n";
      return 1;
    }
    std::cout << "wrote " << corpus_dir.string() << " (" << loaded.instances.size()
              << " instances) and " << fixtures_file.string() << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "make_corpus: " << e.what() << "\n";
    return 1;
  }
}
