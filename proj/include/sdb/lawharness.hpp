#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sdb/instance.hpp"

namespace sdb {

/// Bounds and seed for randomized law checking. The same seed and bounds
/// produce the identical case stream and a byte-identical report.
struct GenConfig {
  std::uint64_t seed = 42;
  int cases = 1000;
  int max_attrs = 4;  // at most 6
  int max_dim = 2;
  int max_rows_per_cell = 3;

  void validate() const;  // throws ModelError on out-of-range bounds
};

struct LawResult {
  std::string law;
  int cases_run = 0;
  int skipped = 0;
  std::optional<int> counterexample_case;
  std::string counterexample;  // serialized objects; empty when none
  std::string shrunk;          // serialized shrunken case; empty when none
  bool replay_verified = false;

  bool failed() const { return counterexample_case.has_value(); }
};

/// Test-seam for law evaluation: laws that exercise the dependent product go
/// through this hook, so a deliberately broken variant can be checked for
/// detectability. Defaults to the real implementation.
struct LawHooks {
  std::function<Instance(const Instance&, const Instance&)> pi;
};

/// All law names, in report order.
std::vector<std::string> law_names();

/// Runs the selected laws (all when `laws` is empty) for cfg.cases cases
/// each. Failures are data, never exceptions. Deterministic given cfg.
std::vector<LawResult> run_laws(const GenConfig& cfg, const std::vector<std::string>& laws = {},
                                const LawHooks* hooks = nullptr);

std::string render_report(const GenConfig& cfg, const std::vector<LawResult>& results);

/// Independent oracle for the dependent product: enumerates every assignment
/// of G-rows to all (subface, key) pairs below each face, filters by the
/// compatibility condition on all restriction arrows, then writes the result
/// in tuple form. Exponential; for small instances only.
Instance pi_oracle(const Instance& j, const Instance& g);

/// Independent oracle for full-tuple enumeration: the whole product of
/// attribute cells filtered by face membership.
std::vector<FullTuple> full_tuples_oracle(const Instance& j);

/// Deterministic generators used by the law suite; exposed for tests.
namespace lawgen {

struct Rng {
  std::uint64_t state;
  std::uint64_t next();
  int below(int n);  // uniform-ish in [0, n)
  bool coin() { return below(2) == 1; }
};

Complex rand_complex(Rng& rng, const GenConfig& cfg);
Instance rand_instance(Rng& rng, const GenConfig& cfg, const Complex& base, bool inhabited);
/// A random display morphism into `target`, generated together with its
/// source complex (faces are chosen so that images are always target faces
/// and vertex images are injective per face).
std::pair<Complex, SchemaMorphism> rand_display_into(Rng& rng, const GenConfig& cfg,
                                                     const Complex& target);
std::optional<FullTuple> rand_tuple(Rng& rng, const Instance& j);

}  // namespace lawgen

}  // namespace sdb
