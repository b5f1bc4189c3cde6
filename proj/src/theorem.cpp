#include "harmony/analysis.hpp"

namespace harmony {

std::string_view to_string(TheoremOutcome o) {
  switch (o) {
    case TheoremOutcome::EllipsoidConfirmed:
      return "EllipsoidConfirmed";
    case TheoremOutcome::HypothesisFails:
      return "HypothesisFails";
    case TheoremOutcome::Inconsistent:
      return "Inconsistent";
  }
  return "Unknown";
}

TheoremReport theorem_verify(const ConvexBody& body, const HyperplaneCov& polar, const ProjPoint& p1,
                             const ProjPoint& p2, const TheoremOptions& options) {
  const auto interior = [&](const ProjPoint& p) {
    return p.is_finite() && body.locate(p.chart()) == Location::Interior;
  };
  if (same_point(p1, p2)) throw GeometryError(ErrorCode::DegenerateInput, "p1 equals p2");
  if (polar.contains(p1) || polar.contains(p2)) throw GeometryError(ErrorCode::DegenerateInput, "p1 or p2 lies on H");
  if (!interior(p1) || !interior(p2)) throw GeometryError(ErrorCode::DegenerateInput, "p1 or p2 is not interior");
  if (body.relation(polar) == HyperplaneRelation::Supports) {
    throw GeometryError(ErrorCode::DegenerateInput, "H supports the body");
  }

  const auto [g, h] = construct_g(p1, p2, polar);
  TheoremReport report;
  report.witnesses = DeviationReport("witness_residual", options.tol_section);

  bool closed_form = false;
  if (const Ellipsoid* e = body.as_ellipsoid()) {
    try {
      closed_form = distance(g, quadric_pole(e->quadric, polar)) <= 1e-8;
    } catch (const GeometryError&) {
      closed_form = false;
    }
  }

  const FlatSample flats = sample_flats_in(polar, h, options.l_count, options.seed);
  report.l_skipped = flats.skipped;
  std::vector<WitnessHomology> witnesses;
  witnesses.reserve(flats.flats.size());
  for (std::size_t i = 0; i < flats.flats.size(); ++i) {
    const Flat& l = flats.flats[i];
    WitnessSearchOptions search = options.search;
    search.seed = options.seed + i;
    WitnessHomology w = closed_form ? ellipsoid_witness(body, polar, p1, p2, l) : witness_search(body, polar, p1, p2, l, search);
    report.witnesses.add("l", w.residual,
                         "{\"l\":" + serialize(l.dual().col(1)) + ",\"axis\":" + serialize(w.phi.axis().coords()) +
                             ",\"center\":" + serialize(w.phi.center().coords()) + "}");
    if (!(w.residual < options.tol_section)) {
      report.failing_witness = w;
      report.outcome = TheoremOutcome::HypothesisFails;
      return report;
    }
    witnesses.push_back(std::move(w));
  }

  const std::vector<Flat> chords = chords_through(body, g, options.chords, options.seed);
  LemmaPoleOptions pole_options;
  pole_options.tol_point = options.tol_pole;
  pole_options.tol_harmonic = options.tol_pole;
  pole_options.tol_witness = options.tol_section;
  report.pole_trace = lemma_pole_trace(body, polar, p1, p2, witnesses, chords, pole_options);

  FalsePoleOptions fp;
  fp.planes = options.planes;
  fp.chords = options.plane_chords;
  fp.seed = options.seed;
  fp.tol_section = options.tol_section;
  fp.tol_pole = options.tol_pole;
  std::vector<Vector> hints;
  if (g.is_finite()) hints.push_back(g.chart());
  report.false_pole_p1 = false_pole_check(body, p1, polar, fp, hints);
  report.false_pole_p2 = false_pole_check(body, p2, polar, fp, hints);

  const std::vector<Vector> samples = sample_boundary(body, options.fit_samples, options.seed);
  report.fit = fit_quadric(samples);

  const bool consistent = report.pole_trace->verdict() == Verdict::Pass &&
                          report.false_pole_p1->verdict() == Verdict::Pass &&
                          report.false_pole_p2->verdict() == Verdict::Pass &&
                          report.fit->ellipsoid_compatible(options.tol_fit);
  report.outcome = consistent ? TheoremOutcome::EllipsoidConfirmed : TheoremOutcome::Inconsistent;
  return report;
}

}  // namespace harmony
