#include "harmony/cli.hpp"

#include <fstream>
#include <functional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "harmony/analysis.hpp"
#include "harmony/homology.hpp"
#include "harmony/scene.hpp"

namespace harmony {

namespace {

std::string num(double x) { return fmt::format("{:.17g}", x); }

std::string vec(const Vector& v) {
  std::string out = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) out += (i ? ", " : "") + num(v[i]);
  return out + ")";
}

Vector parse_numbers(const std::string& text, const std::string& what) {
  std::vector<double> values;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw GeometryError(ErrorCode::ValidationError, what + ": '" + text + "' is not a comma-separated number list");
    }
  }
  if (values.empty()) throw GeometryError(ErrorCode::ValidationError, what + ": empty coordinate list");
  return Eigen::Map<Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return 0;
    case Verdict::Fail:
      return 1;
    case Verdict::Degenerate:
      return 2;
  }
  return 2;
}

void print_report(std::ostream& out, const DeviationReport& r) {
  fmt::print(out, "check {}: {} max_dev={} mean_dev={} n_samples={} skipped={} tolerance={}\n", r.name(),
             to_string(r.verdict()), num(r.max_dev()), num(r.mean_dev()), r.n_samples(), r.skipped(),
             num(r.tolerance()));
  if (r.n_samples() > 0) fmt::print(out, "  worst_witness: {}\n", r.worst_witness());
}

// Accumulates per-sample rows from several reports for --csv.
class CsvTable {
 public:
  void add(const DeviationReport& r) {
    for (const auto& rec : r.records()) rows_.push_back({r.name() + ":" + rec.kind, rec.deviation, rec.witness});
  }
  std::size_t size() const { return rows_.size(); }

  void write(const std::string& path) const {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw GeometryError(ErrorCode::ValidationError, "--csv: cannot write " + path);
    file << "sample_id,kind,deviation,witness\n";
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      std::string quoted;
      for (char c : rows_[i].witness) quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
      file << i << ',' << rows_[i].kind << ',' << num(rows_[i].deviation) << ",\"" << quoted << "\"\n";
    }
  }

 private:
  struct Row {
    std::string kind;
    double deviation;
    std::string witness;
  };
  std::vector<Row> rows_;
};

struct Overrides {
  CLI::Option* samples = nullptr;
  CLI::Option* planes = nullptr;
  CLI::Option* l_count = nullptr;
  CLI::Option* tol_pole = nullptr;
  CLI::Option* tol_section = nullptr;
  CLI::Option* seed = nullptr;
  std::size_t samples_value = 0, planes_value = 0, l_count_value = 0;
  double tol_pole_value = 0, tol_section_value = 0;
  std::uint64_t seed_value = 0;
  std::string csv;
  std::string scene_path;
};

void add_scene_options(CLI::App* cmd, Overrides& o) {
  cmd->add_option("scene", o.scene_path, "scene JSON file")->required();
  o.samples = cmd->add_option("--samples", o.samples_value, "sample count")->check(CLI::PositiveNumber);
  o.planes = cmd->add_option("--planes", o.planes_value, "planes per point or per l")->check(CLI::PositiveNumber);
  o.l_count = cmd->add_option("--l-count", o.l_count_value, "number of flats l in H")->check(CLI::PositiveNumber);
  o.tol_pole = cmd->add_option("--tol-pole", o.tol_pole_value, "tolerance of analytic checks")->check(CLI::PositiveNumber);
  o.tol_section =
      cmd->add_option("--tol-section", o.tol_section_value, "tolerance of search checks")->check(CLI::PositiveNumber);
  o.seed = cmd->add_option("--seed", o.seed_value, "random seed");
  cmd->add_option("--csv", o.csv, "write per-sample deviations to this CSV file");
}

Scene load_scene(const Overrides& o) {
  Scene s = parse_scene(o.scene_path);
  if (o.samples->count()) s.samples = o.samples_value;
  if (o.planes->count()) s.planes = o.planes_value;
  if (o.l_count->count()) s.l_count = o.l_count_value;
  if (o.tol_pole->count()) s.tol_pole = o.tol_pole_value;
  if (o.tol_section->count()) s.tol_section = o.tol_section_value;
  if (o.seed->count()) s.seed = o.seed_value;
  return s;
}

void finish_csv(const Overrides& o, const CsvTable& table) {
  if (!o.csv.empty()) table.write(o.csv);
}

ProjPoint pick_point(const std::string& which, const Scene& s, const ProjPoint& g) {
  if (which == "g") return g;
  if (which == "p1") return s.point1();
  if (which == "p2") return s.point2();
  const Vector x = parse_numbers(which, "--point");
  if (x.size() != s.dimension) throw GeometryError(ErrorCode::ValidationError, "--point: wrong dimension");
  return ProjPoint::from_chart(x);
}

bool closed_form_witness(const ConvexBody& body, const HyperplaneCov& polar, const ProjPoint& g) {
  const Ellipsoid* e = body.as_ellipsoid();
  if (!e) return false;
  try {
    return distance(g, quadric_pole(e->quadric, polar)) <= 1e-8;
  } catch (const GeometryError&) {
    return false;
  }
}

WitnessHomology find_witness(const ConvexBody& body, const Scene& s, const Flat& l, bool closed_form,
                             std::uint64_t seed) {
  if (closed_form) return ellipsoid_witness(body, s.polar, s.point1(), s.point2(), l);
  WitnessSearchOptions options;
  options.seed = seed;
  return witness_search(body, s.polar, s.point1(), s.point2(), l, options);
}

void print_header(std::ostream& out, const std::string& command, const Scene& s) {
  fmt::print(out, "command: {}\n", command);
  fmt::print(out, "dimension: {}\nH: {}\np1: {}\np2: {}\nseed: {}\n", s.dimension, vec(s.polar.coords()), vec(s.p1),
             vec(s.p2), s.seed);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Harmonic homologies, poles and false poles of convex bodies", "harmony"};
  app.require_subcommand(1);
  std::function<int()> action;

  // cross-ratio
  auto* cr = app.add_subcommand("cross-ratio", "cross ratio [a, b; c, d] of four collinear points");
  std::vector<std::string> cr_points;
  bool cr_homogeneous = false;
  cr->add_option("points", cr_points, "four points, comma-separated coordinates")->required()->expected(4);
  cr->add_flag("--homogeneous", cr_homogeneous, "coordinates are homogeneous");
  cr->callback([&] {
    action = [&] {
      std::vector<ProjPoint> pts;
      for (const auto& text : cr_points) {
        const Vector v = parse_numbers(text, "point");
        pts.push_back(cr_homogeneous ? ProjPoint(v) : ProjPoint::from_chart(v));
      }
      const CrossRatioValue value = cross_ratio(pts[0], pts[1], pts[2], pts[3]);
      fmt::print(out, "command: cross-ratio\n");
      fmt::print(out, "lambda:mu = {} : {}\n", num(value.lambda()), num(value.mu()));
      fmt::print(out, "value: {}\n", value.is_infinite() ? std::string("inf") : num(value.value()));
      fmt::print(out, "harmonic_deviation: {}\n", num(value.harmonic_deviation()));
      return 0;
    };
  });

  // homology-apply
  auto* ha = app.add_subcommand("homology-apply", "apply the harmonic homology with given axis and center");
  std::string ha_axis, ha_center;
  std::vector<std::string> ha_points;
  ha->add_option("--axis", ha_axis, "axis covector (homogeneous)")->required();
  ha->add_option("--center", ha_center, "center (homogeneous)")->required();
  ha->add_option("points", ha_points, "points (homogeneous)")->required();
  ha->callback([&] {
    action = [&] {
      const HarmonicHomology phi(HyperplaneCov(parse_numbers(ha_axis, "--axis")),
                                 ProjPoint(parse_numbers(ha_center, "--center")));
      fmt::print(out, "command: homology-apply\n");
      for (const auto& text : ha_points) {
        const ProjPoint x(parse_numbers(text, "point"));
        const ProjPoint y = phi.apply(x);
        fmt::print(out, "{} -> {}", vec(x.coords()), vec(y.coords()));
        if (y.is_finite()) fmt::print(out, " chart {}", vec(y.chart()));
        fmt::print(out, "\n");
      }
      return 0;
    };
  });

  // pole-check
  Overrides pc_o;
  std::string pc_point = "g";
  auto* pc = app.add_subcommand("pole-check", "test whether a point is a pole of the body with polar H");
  add_scene_options(pc, pc_o);
  pc->add_option("--point", pc_point, "g, p1, p2 or chart coordinates (default g)");
  pc->callback([&] {
    action = [&] {
      const Scene s = load_scene(pc_o);
      const ConvexBody body = s.make_body();
      const auto [g, h] = construct_g(s.point1(), s.point2(), s.polar);
      const ProjPoint p = pick_point(pc_point, s, g);
      const DeviationReport r = pole_check(body, p, s.polar, s.samples, s.seed, s.tol_pole);
      print_header(out, "pole-check", s);
      fmt::print(out, "point: {}\n", vec(p.coords()));
      print_report(out, r);
      fmt::print(out, "verdict: {}\n", to_string(r.verdict()));
      CsvTable table;
      table.add(r);
      finish_csv(pc_o, table);
      return exit_code(r.verdict());
    };
  });

  // false-pole-check
  Overrides fp_o;
  std::string fp_point = "p1";
  auto* fp = app.add_subcommand("false-pole-check", "search section poles on random 2-planes through a point");
  add_scene_options(fp, fp_o);
  fp->add_option("--point", fp_point, "p1, p2 or chart coordinates (default p1)");
  fp->callback([&] {
    action = [&] {
      const Scene s = load_scene(fp_o);
      const ConvexBody body = s.make_body();
      const auto [g, h] = construct_g(s.point1(), s.point2(), s.polar);
      const ProjPoint p = pick_point(fp_point, s, g);
      FalsePoleOptions options;
      options.planes = s.planes;
      options.seed = s.seed;
      options.tol_section = s.tol_section;
      options.tol_pole = s.tol_pole;
      std::vector<Vector> hints;
      if (g.is_finite()) hints.push_back(g.chart());
      const FalsePoleReport r = false_pole_check(body, p, s.polar, options, hints);
      print_header(out, "false-pole-check", s);
      fmt::print(out, "point: {}\n", vec(p.coords()));
      print_report(out, r.sections);
      print_report(out, r.point_pole);
      fmt::print(out, "point_is_pole: {}\nfalse_pole: {}\n", r.point_is_pole, r.is_false_pole());
      fmt::print(out, "verdict: {}\n", to_string(r.verdict()));
      CsvTable table;
      table.add(r.sections);
      finish_csv(fp_o, table);
      return exit_code(r.verdict());
    };
  });

  // lemma-pole
  Overrides lp_o;
  auto* lp = app.add_subcommand("lemma-pole", "trace that g is a pole with polar H, from witness homologies");
  add_scene_options(lp, lp_o);
  lp->callback([&] {
    action = [&] {
      const Scene s = load_scene(lp_o);
      const ConvexBody body = s.make_body();
      const auto [g, h] = construct_g(s.point1(), s.point2(), s.polar);
      const bool closed = closed_form_witness(body, s.polar, g);
      const FlatSample flats = sample_flats_in(s.polar, h, s.l_count, s.seed);
      std::vector<WitnessHomology> witnesses;
      for (std::size_t i = 0; i < flats.flats.size(); ++i) {
        witnesses.push_back(find_witness(body, s, flats.flats[i], closed, s.seed + i));
      }
      const std::vector<Flat> chords = chords_through(body, g, s.samples, s.seed);
      LemmaPoleOptions options;
      options.tol_point = s.tol_pole;
      options.tol_harmonic = s.tol_pole;
      options.tol_witness = s.tol_section;
      const TraceReport r = lemma_pole_trace(body, s.polar, s.point1(), s.point2(), witnesses, chords, options);
      print_header(out, "lemma-pole", s);
      fmt::print(out, "g: {}\nwitnesses: {} ({})\nl_skipped: {}\n", vec(g.coords()), witnesses.size(),
                 closed ? "closed form" : "searched", flats.skipped);
      CsvTable table;
      for (const auto& c : r.checks) {
        print_report(out, c);
        table.add(c);
      }
      fmt::print(out, "verdict: {}\n", to_string(r.verdict()));
      finish_csv(lp_o, table);
      return exit_code(r.verdict());
    };
  });

  // lemma-falsepole
  Overrides lf_o;
  auto* lf = app.add_subcommand("lemma-falsepole", "quadrangle trace that p1 is a false pole (10 flats l unless --l-count)");
  add_scene_options(lf, lf_o);
  lf->callback([&] {
    action = [&] {
      Scene s = load_scene(lf_o);
      if (!lf_o.l_count->count()) s.l_count = 10;
      const ConvexBody body = s.make_body();
      const auto [g, h] = construct_g(s.point1(), s.point2(), s.polar);
      const bool closed = closed_form_witness(body, s.polar, g);
      const FlatSample flats = sample_flats_in(s.polar, h, s.l_count, s.seed);
      LemmaFalsePoleOptions options;
      options.planes = s.planes;
      options.tolerance = s.tol_pole;
      options.tol_section = s.tol_section;
      std::vector<DeviationReport> merged;
      for (std::size_t i = 0; i < flats.flats.size(); ++i) {
        const WitnessHomology w = find_witness(body, s, flats.flats[i], closed, s.seed + i);
        options.seed = s.seed + i;
        const TraceReport r = lemma_falsepole_trace(body, s.polar, s.point1(), s.point2(), w, options);
        for (const auto& c : r.checks) {
          auto it = std::find_if(merged.begin(), merged.end(), [&](const auto& m) { return m.name() == c.name(); });
          if (it == merged.end()) {
            merged.push_back(c);
          } else {
            it->merge(c);
          }
        }
      }
      const TraceReport total{merged};
      print_header(out, "lemma-falsepole", s);
      fmt::print(out, "flats: {}\nl_skipped: {}\n", flats.flats.size(), flats.skipped);
      CsvTable table;
      for (const auto& c : total.checks) {
        print_report(out, c);
        table.add(c);
      }
      fmt::print(out, "verdict: {}\n", to_string(total.verdict()));
      finish_csv(lf_o, table);
      return exit_code(total.verdict());
    };
  });

  // theorem-verify
  Overrides tv_o;
  auto* tv = app.add_subcommand("theorem-verify", "decide whether the body is an ellipsoid from the harmonic data");
  add_scene_options(tv, tv_o);
  tv->callback([&] {
    action = [&] {
      const Scene s = load_scene(tv_o);
      const ConvexBody body = s.make_body();
      TheoremOptions options;
      options.l_count = s.l_count;
      options.seed = s.seed;
      options.planes = s.planes;
      options.tol_pole = s.tol_pole;
      options.tol_section = s.tol_section;
      const TheoremReport r = theorem_verify(body, s.polar, s.point1(), s.point2(), options);
      print_header(out, "theorem-verify", s);
      fmt::print(out, "l_skipped: {}\n", r.l_skipped);
      CsvTable table;
      print_report(out, r.witnesses);
      table.add(r.witnesses);
      if (r.failing_witness) {
        fmt::print(out, "failing l (dual basis): {} ; {}\n", vec(r.failing_witness->l.dual().col(0)),
                   vec(r.failing_witness->l.dual().col(1)));
        fmt::print(out, "best witness residual: {}\n", num(r.failing_witness->residual));
      }
      if (r.pole_trace) {
        for (const auto& c : r.pole_trace->checks) {
          print_report(out, c);
          table.add(c);
        }
      }
      if (r.false_pole_p1) {
        print_report(out, r.false_pole_p1->sections);
        table.add(r.false_pole_p1->sections);
      }
      if (r.false_pole_p2) {
        print_report(out, r.false_pole_p2->sections);
        table.add(r.false_pole_p2->sections);
      }
      if (r.fit) {
        fmt::print(out, "fit residual: {}\nfit ellipsoid signature: {}\n", num(r.fit->residual),
                   r.fit->ellipsoid_signature);
      }
      fmt::print(out, "verdict: {}", to_string(r.outcome));
      if (r.outcome == TheoremOutcome::EllipsoidConfirmed) fmt::print(out, ", fit residual {}", num(r.fit->residual));
      fmt::print(out, "\n");
      finish_csv(tv_o, table);
      return r.outcome == TheoremOutcome::EllipsoidConfirmed ? 0 : 1;
    };
  });

  // fit
  Overrides ft_o;
  auto* ft = app.add_subcommand("fit", "fit a quadric to boundary samples of the body");
  add_scene_options(ft, ft_o);
  ft->callback([&] {
    action = [&] {
      Scene s = load_scene(ft_o);
      if (!ft_o.samples->count()) s.samples = 500;
      const ConvexBody body = s.make_body();
      const QuadricFit fit = fit_quadric(sample_boundary(body, s.samples, s.seed));
      print_header(out, "fit", s);
      fmt::print(out, "quadric:\n");
      for (Eigen::Index r = 0; r < fit.quadric.rows(); ++r) fmt::print(out, "  {}\n", vec(fit.quadric.row(r).transpose()));
      fmt::print(out, "residual: {}\nellipsoid_signature: {}\n", num(fit.residual), fit.ellipsoid_signature);
      const bool ok = fit.ellipsoid_compatible(s.tol_section);
      fmt::print(out, "verdict: {}\n", ok ? "Ellipsoid" : "NotEllipsoid");
      CsvTable table;
      finish_csv(ft_o, table);
      return ok ? 0 : 1;
    };
  });

  // fixture
  auto* fx = app.add_subcommand("fixture", "emit a generated scene");
  std::string fx_kind, fx_out;
  int fx_dim = 3;
  std::uint64_t fx_seed = 42;
  fx->add_option("kind", fx_kind, "sphere-canonical, ellipsoid-random or superellipsoid")->required();
  fx->add_option("--dim", fx_dim, "dimension")->check(CLI::Range(2, 16));
  fx->add_option("--seed", fx_seed, "random seed");
  fx->add_option("--out", fx_out, "output path (default standard output)");
  fx->callback([&] {
    action = [&] {
      const Scene s = generate_fixture(parse_fixture_kind(fx_kind), fx_dim, fx_seed);
      const std::string text = emit_scene(s);
      if (fx_out.empty()) {
        out << text;
      } else {
        std::ofstream file(fx_out, std::ios::binary);
        if (!file) throw GeometryError(ErrorCode::ValidationError, "--out: cannot write " + fx_out);
        file << text;
      }
      return 0;
    };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  try {
    return action ? action() : 2;
  } catch (const GeometryError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace harmony
