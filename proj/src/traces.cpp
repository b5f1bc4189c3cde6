#include <algorithm>
#include <cmath>

#include "harmony/analysis.hpp"
#include "harmony/random.hpp"

namespace harmony {

namespace {

std::string witness_text(const WitnessHomology& w) {
  return "{\"axis\":" + serialize(w.phi.axis().coords()) + ",\"center\":" + serialize(w.phi.center().coords()) + "}";
}

std::string points_text(std::initializer_list<std::pair<const char*, const ProjPoint*>> items) {
  std::string out = "{";
  bool first = true;
  for (const auto& [name, p] : items) {
    if (!first) out += ",";
    first = false;
    out += "\"" + std::string(name) + "\":" + serialize(p->coords());
  }
  return out + "}";
}

}  // namespace

TraceReport lemma_pole_trace(const ConvexBody& body, const HyperplaneCov& polar, const ProjPoint& p1,
                             const ProjPoint& p2, std::span<const WitnessHomology> witnesses,
                             std::span<const Flat> chords, const LemmaPoleOptions& options) {
  const auto [g, h] = construct_g(p1, p2, polar);
  const Flat probe = Flat::line(p1, p2);
  DeviationReport validity("witness", options.tol_witness);
  DeviationReport conjugate("g_prime", options.tol_point);
  DeviationReport pencil("pencil", options.tol_harmonic);
  DeviationReport harmonic("chords", options.tol_harmonic);

  for (const auto& w : witnesses) {
    const HyperplaneCov& axis = w.phi.axis();
    const ProjPoint& tau = w.phi.center();
    const std::string text = witness_text(w);

    double incidence = std::abs(polar.evaluate(tau));
    for (const auto& s : w.l.span_points()) incidence = std::max(incidence, std::abs(axis.evaluate(s)));
    validity.add("witness", std::max(incidence, w.residual), text);

    HyperplaneCov pi1 = polar, pi2 = polar;
    try {
      pi1 = join(w.l, p1).as_hyperplane();
      pi2 = join(w.l, p2).as_hyperplane();
    } catch (const GeometryError&) {
      conjugate.skip();
      pencil.skip();
      continue;
    }

    try {
      conjugate.add("g_prime", distance(intersect(probe, axis), g), text);
    } catch (const GeometryError&) {
      conjugate.add("g_prime", 1.0, text);
    }

    const auto pencil_dev = [&](const Flat& transversal) {
      try {
        return pencil_cross_ratio(pi1, pi2, axis, polar, transversal).harmonic_deviation();
      } catch (const GeometryError&) {
        return 1.0;
      }
    };
    pencil.add("pencil_p", pencil_dev(probe), text);
    try {
      const Flat gt = Flat::line(g, tau);
      const ProjPoint q1 = intersect(gt, pi1), q2 = intersect(gt, pi2);
      pencil.add("pencil_q", pencil_dev(Flat::line(q1, q2)), text);
      pencil.add("q_harmonic", cross_ratio(q1, q2, g, tau).harmonic_deviation(), text);
    } catch (const GeometryError&) {
      pencil.add("q_harmonic", 1.0, text);
    }
  }

  for (const auto& line : chords) {
    try {
      const auto [a, b] = chord(body, line);
      const ProjPoint k = intersect(line, polar);
      harmonic.add("chord", cross_ratio(a, b, g, k).harmonic_deviation(),
                   points_text({{"A", &a}, {"B", &b}, {"g", &g}, {"k", &k}}));
    } catch (const GeometryError&) {
      harmonic.skip();
    }
  }

  return {{validity, conjugate, pencil, harmonic}};
}

TraceReport lemma_falsepole_trace(const ConvexBody& body, const HyperplaneCov& polar, const ProjPoint& p1,
                                  const ProjPoint& p2, const WitnessHomology& witness,
                                  const LemmaFalsePoleOptions& options) {
  const auto [g, h] = construct_g(p1, p2, polar);
  const SectionPair pair = sections_through(body, p1, p2, witness.l);
  const HarmonicHomology& phi = witness.phi;
  const ProjPoint& tau = phi.center();
  if (same_point(g, tau)) throw GeometryError(ErrorCode::DegenerateInput, "g coincides with the witness center");
  const HarmonicHomology pole_phi(polar, g);

  const Flat gt = Flat::line(g, tau);
  const ProjPoint q1 = intersect(gt, pair.pi1), q2 = intersect(gt, pair.pi2);
  if (same_point(q1, g) || same_point(q1, tau) || same_point(q2, g) || same_point(q2, tau) || same_point(q1, q2)) {
    throw GeometryError(ErrorCode::DegenerateInput, "q1, q2 are not distinct from g and tau");
  }

  const auto outside = [&](const ProjPoint& x) {
    return !x.is_finite() || body.locate(x.chart()) == Location::Exterior;
  };
  DeviationReport check_a("a", options.tolerance), check_b("b", options.tolerance);
  DeviationReport check_c("c", options.tolerance), check_d("d", options.tolerance);
  DeviationReport check_e("e", options.tolerance), check_boundary("b_boundary", options.tol_section);

  bool swapped;
  if (outside(tau)) {
    swapped = false;
  } else if (outside(g)) {
    swapped = true;
  } else {
    check_a.skip();
    return {{check_a, check_b, check_c, check_d, check_e}};
  }
  const ProjPoint& apex = swapped ? g : tau;
  const ProjPoint& other = swapped ? tau : g;
  const HarmonicHomology& apex_phi = swapped ? pole_phi : phi;
  const HarmonicHomology& other_phi = swapped ? phi : pole_phi;
  const bool exact_pole_map = body.as_ellipsoid() != nullptr;

  const std::string text = witness_text(witness);
  check_d.add("q_harmonic", cross_ratio(q1, q2, g, tau).harmonic_deviation(), text);
  if (!exact_pole_map) {
    // The pole homology is only known to preserve the body when the hypothesis holds.
    for (const auto& s : sample_boundary(body, 64, options.seed)) {
      const ProjPoint image = pole_phi.apply(ProjPoint::from_chart(s));
      const double dev = image.is_finite(1e-9) ? std::abs(body.defining_function(image.chart())) : 1.0;
      check_boundary.add("boundary", dev, "{\"x\":" + serialize(s) + "}");
    }
  }

  for (std::size_t j = 0; j < options.planes; ++j) {
    auto rng = make_stream(options.seed, j);
    const Vector u = random_unit(rng, pair.k1.dim());
    const Vector w_chart = pair.k1.from_local(uniform(rng, 0.05, 0.9) * pair.k1.radius(u) * u);
    const ProjPoint w = ProjPoint::from_chart(w_chart);
    try {
      if (join(gt, w).dim() != 2) {
        check_a.skip();
        continue;
      }
      const auto [s11, s21] = chord(body, Flat::line(q1, w));
      const ProjPoint s12 = intersect(Flat::line(apex, s11), pair.pi2);
      const ProjPoint s22 = intersect(Flat::line(apex, s21), pair.pi2);
      const std::string config = points_text({{"s11", &s11}, {"s21", &s21}, {"s12", &s12}, {"s22", &s22}});

      const double dev_apex = std::max(distance(apex_phi.apply(s11), s12), distance(apex_phi.apply(s21), s22));
      const double dev_other = std::max(distance(other_phi.apply(s11), s22), distance(other_phi.apply(s21), s12));
      if (!swapped || exact_pole_map) check_a.add("apex_map", dev_apex, config);
      if (swapped || exact_pole_map) check_b.add("cross_map", dev_other, config);

      const Flat diag = meet(Flat::line(s11, s22), Flat::line(s12, s21));
      check_c.add("diagonal", diag.dim() == 0 ? distance(diag.as_point(), other) : 1.0, config);

      const ProjPoint z = intersect(Flat::line(s11, s21), polar);
      check_e.add("quadrangle", cross_ratio(s11, s21, q1, z).harmonic_deviation(), config);
    } catch (const GeometryError&) {
      check_a.skip();
    }
  }
  TraceReport out{{check_a, check_b, check_c, check_d, check_e}};
  if (!exact_pole_map) out.checks.push_back(check_boundary);
  return out;
}

}  // namespace harmony
