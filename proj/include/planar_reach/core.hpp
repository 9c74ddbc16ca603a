#pragma once

#include <cstdint>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace planar_reach {

using Vertex = int32_t;
using EdgeId = int32_t;
using FaceId = int32_t;

// A dart is a directed half-edge: dart 2*e points tail->head of edge e,
// dart 2*e+1 points head->tail.  rev() flips direction.
using Dart = int32_t;

constexpr Vertex kNoVertex = -1;
constexpr EdgeId kNoEdge = -1;
constexpr FaceId kNoFace = -1;
constexpr Dart kNoDart = -1;

inline constexpr Dart make_dart(EdgeId e, int end) { return 2 * e + end; }
inline constexpr EdgeId dart_edge(Dart d) { return d >> 1; }
inline constexpr Dart dart_rev(Dart d) { return d ^ 1; }
// True when the dart is traversed along the edge direction (tail->head).
inline constexpr bool dart_forward(Dart d) { return (d & 1) == 0; }

class GraphError : public std::runtime_error {
 public:
  explicit GraphError(const std::string& what) : std::runtime_error(what) {}
};

class ParseError : public GraphError {
 public:
  ParseError(const std::string& what, int line)
      : GraphError("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Internal consistency check.  These guard data-structure invariants that
// queries rely on; they stay active in release builds because a silent
// violation produces wrong reachability answers, not a crash.
#define PR_CHECK(cond, msg)                                               \
  do {                                                                    \
    if (!(cond)) {                                                        \
      std::ostringstream oss__;                                           \
      oss__ << "internal check failed at " << __FILE__ << ":" << __LINE__ \
            << ": " << msg;                                               \
      throw ::planar_reach::GraphError(oss__.str());                      \
    }                                                                     \
  } while (0)

// Counts structure primitives touched while answering queries, so tests can
// pin constant per-query budgets.  Cheap enough to keep in all builds.
struct OpCounter {
  uint64_t level_anc = 0;
  uint64_t mask_op = 0;
  uint64_t label_cmp = 0;
  uint64_t table_read = 0;

  void reset() { *this = OpCounter{}; }
  uint64_t total() const { return level_anc + mask_op + label_cmp + table_read; }
};

inline OpCounter& op_counter() {
  static thread_local OpCounter counter;
  return counter;
}

// Logical size of a structure in 64-bit words; vectors report their element
// payload, ignoring allocator slack, so space accounting is deterministic.
template <typename T>
uint64_t vec_words(const std::vector<T>& v) {
  return (v.size() * sizeof(T) + 7) / 8;
}

}  // namespace planar_reach
