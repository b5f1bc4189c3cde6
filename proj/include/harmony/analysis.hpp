#pragma once

// Pole and false-pole tests, witness homologies between hypersections, the
// numerical traces of the two lemmas behind the ellipsoid characterization,
// and the end-to-end verifier.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "harmony/body.hpp"
#include "harmony/homology.hpp"
#include "harmony/projective.hpp"

namespace harmony {

enum class Verdict { Pass, Fail, Degenerate };
std::string_view to_string(Verdict v);

struct SampleRecord {
  std::size_t id;
  std::string kind;
  double deviation;
  std::string witness;  // serialized configuration that reproduces `deviation`
};

// Aggregated deviations of one check. Pass iff every sample is below tolerance.
class DeviationReport {
 public:
  DeviationReport(std::string name, double tolerance);

  void add(std::string kind, double deviation, std::string witness);
  /// Counts a work item that could not be evaluated.
  void skip() { ++skipped_; }
  /// Appends the other report's samples; max/mean/count/worst merge associatively.
  void merge(const DeviationReport& other);

  const std::string& name() const { return name_; }
  double tolerance() const { return tolerance_; }
  double max_dev() const { return max_dev_; }
  double mean_dev() const;
  std::size_t n_samples() const { return records_.size(); }
  std::size_t skipped() const { return skipped_; }
  const std::string& worst_witness() const { return worst_witness_; }
  const std::vector<SampleRecord>& records() const { return records_; }
  Verdict verdict() const;

 private:
  void absorb(const SampleRecord& r);

  std::string name_;
  double tolerance_;
  double max_dev_ = 0.0;
  double sum_dev_ = 0.0;
  std::size_t skipped_ = 0;
  std::string worst_witness_;
  std::vector<SampleRecord> records_;
};

/// Several named checks; passes when every evaluated check passes.
struct TraceReport {
  std::vector<DeviationReport> checks;

  Verdict verdict() const;
  const DeviationReport* find(std::string_view name) const;
  std::size_t n_samples() const;
  double max_dev() const;
};

/// JSON array text with 17 significant digits.
std::string serialize(const Vector& v);

struct HarmonicPair {
  ProjPoint g;  // harmonic conjugate of h with respect to p1, p2
  ProjPoint h;  // L(p1, p2) ^ H
};

/// Throws CoincidentPoints or PointOnPolar.
HarmonicPair construct_g(const ProjPoint& p1, const ProjPoint& p2, const HyperplaneCov& polar);

/// Samples lines through the interior point p and measures how far
/// [A, B; p, q] is from -1 (q on the candidate polar).
DeviationReport pole_check(const ConvexBody& body, const ProjPoint& p, const HyperplaneCov& polar,
                           std::size_t samples, std::uint64_t seed, double tolerance = 1e-8);

struct FalsePoleOptions {
  std::size_t planes = 20;
  std::size_t chords = 32;  // chord directions per deviation evaluation
  std::uint64_t seed = 42;
  double tol_section = 1e-6;
  double tol_pole = 1e-8;
  std::size_t pole_samples = 500;  // for the "p is not a pole" test
};

struct SectionPole {
  Vector plane_u;  // chart directions spanning the 2-plane through p
  Vector plane_v;
  Vector pole;     // best candidate pole (chart)
  double deviation;
};

struct FalsePoleReport {
  DeviationReport sections{"section_poles", 1e-6};
  DeviationReport point_pole{"point_pole", 1e-8};
  bool point_is_pole = false;
  std::vector<SectionPole> poles;

  Verdict verdict() const { return sections.verdict(); }
  bool is_false_pole() const { return verdict() == Verdict::Pass && !point_is_pole; }
};

/// For random 2-planes through p, searches the section for a point whose
/// chords are all harmonically cut by the trace of the polar. `hints` are
/// extra chart points whose projections seed the search.
FalsePoleReport false_pole_check(const ConvexBody& body, const ProjPoint& p, const HyperplaneCov& polar,
                                 const FalsePoleOptions& options = {}, std::span<const Vector> hints = {});

struct WitnessHomology {
  Flat l;
  HarmonicHomology phi;
  double residual;
};

/// aff{p_i, l} and the corresponding sections of the body, seeded at p_i.
struct SectionPair {
  HyperplaneCov pi1;
  HyperplaneCov pi2;
  SectionBody k1;
  SectionBody k2;
};

SectionPair sections_through(const ConvexBody& body, const ProjPoint& p1, const ProjPoint& p2, const Flat& l);

/// Largest boundary distance of phi(sample) to `to` over boundary samples of `from`.
double mapping_residual(const HarmonicHomology& phi, const SectionBody& from, const SectionBody& to,
                        std::size_t samples);

/// Closed-form witness for ellipsoids: axis join(l, g), center the pole of the
/// axis. Throws FixtureViolation when g is not the pole of H, DegenerateAxis
/// when the axis degenerates.
WitnessHomology ellipsoid_witness(const ConvexBody& ellipsoid, const HyperplaneCov& polar, const ProjPoint& p1,
                                  const ProjPoint& p2, const Flat& l, std::size_t samples = 200);

struct WitnessSearchOptions {
  std::uint64_t seed = 42;
  int starts = 8;
  std::size_t search_samples = 48;
  std::size_t final_samples = 200;
  int max_iterations = 1500;
};

/// Multi-start simplex search over homologies with l in the axis and the
/// center on H, minimizing the symmetric section-mapping distance.
WitnessHomology witness_search(const ConvexBody& body, const HyperplaneCov& polar, const ProjPoint& p1,
                               const ProjPoint& p2, const Flat& l, const WitnessSearchOptions& options = {});

/// Lines through g: random directions when g is interior, otherwise lines
/// through random interior points.
std::vector<Flat> chords_through(const ConvexBody& body, const ProjPoint& g, std::size_t n, std::uint64_t seed);

struct LemmaPoleOptions {
  double tol_point = 1e-8;
  double tol_harmonic = 1e-9;
  double tol_witness = 1e-6;
};

/// Checks: witness validity, g' = G ^ L(p1,p2) equals g, pencil harmonicity of
/// {Pi1, Pi2; G, H} on L(p1,p2) and L(q1,q2) with [q1,q2; g,tau] = -1, and
/// [r1, r2; g, k] = -1 on every chord through g.
TraceReport lemma_pole_trace(const ConvexBody& body, const HyperplaneCov& polar, const ProjPoint& p1,
                             const ProjPoint& p2, std::span<const WitnessHomology> witnesses,
                             std::span<const Flat> chords, const LemmaPoleOptions& options = {});

struct LemmaFalsePoleOptions {
  std::size_t planes = 20;  // 2-planes through L(q1, q2)
  std::uint64_t seed = 42;
  double tolerance = 1e-8;
  double tol_section = 1e-6;
};

/// Checks (a)-(e) of the quadrangle argument on random 2-planes through
/// L(q1, q2), q_i = L(g, tau) ^ Pi_i.
TraceReport lemma_falsepole_trace(const ConvexBody& body, const HyperplaneCov& polar, const ProjPoint& p1,
                                  const ProjPoint& p2, const WitnessHomology& witness,
                                  const LemmaFalsePoleOptions& options = {});

/// Random (d-2)-flats inside H, skipping those through `avoid`.
struct FlatSample {
  std::vector<Flat> flats;
  std::size_t skipped = 0;
};
FlatSample sample_flats_in(const HyperplaneCov& polar, const ProjPoint& avoid, std::size_t n, std::uint64_t seed);

enum class TheoremOutcome { EllipsoidConfirmed, HypothesisFails, Inconsistent };
std::string_view to_string(TheoremOutcome o);

struct TheoremOptions {
  std::size_t l_count = 200;
  std::uint64_t seed = 42;
  std::size_t chords = 500;
  std::size_t planes = 20;
  std::size_t plane_chords = 32;
  std::size_t fit_samples = 500;
  double tol_pole = 1e-8;
  double tol_section = 1e-6;
  double tol_fit = 1e-6;
  WitnessSearchOptions search{};
};

struct TheoremReport {
  TheoremOutcome outcome = TheoremOutcome::Inconsistent;
  std::size_t l_skipped = 0;
  DeviationReport witnesses{"witness_residual", 1e-6};
  std::optional<WitnessHomology> failing_witness;
  std::optional<TraceReport> pole_trace;
  std::optional<FalsePoleReport> false_pole_p1;
  std::optional<FalsePoleReport> false_pole_p2;
  std::optional<QuadricFit> fit;
};

/// Throws DegenerateInput for p1 == p2, p_i on H, p_i not interior, or H supporting the body.
TheoremReport theorem_verify(const ConvexBody& body, const HyperplaneCov& polar, const ProjPoint& p1,
                             const ProjPoint& p2, const TheoremOptions& options = {});

}  // namespace harmony
