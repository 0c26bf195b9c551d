// Command-line surface for the syncorr library: validation and mapping of
// correlation files, outcome embedding/projection, model synthesis, exact
// slice optimization, D_q sampling, construction verification, and
// dominance reports. Every subcommand prints one JSON summary to stdout and
// writes artifacts to the paths given by its flags.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "syncorr/io.hpp"
#include "syncorr/slices.hpp"
#include "syncorr/tracial.hpp"
#include "syncorr/universal3.hpp"

using namespace syncorr;

namespace {

constexpr double kResidualGate = 1e-12;

std::vector<double> parse_list(const std::string& csv) {
  std::vector<double> out;
  std::string token;
  for (std::size_t i = 0; i <= csv.size(); ++i) {
    if (i == csv.size() || csv[i] == ',') {
      if (token.empty())
        throw ConstraintError("format", "empty entry in list: " + csv);
      out.push_back(std::stod(token));
      token.clear();
    } else {
      token += csv[i];
    }
  }
  return out;
}

Json report_to_json(const ClassReport& r) {
  return Json{{"is_correlation", r.is_correlation},
              {"is_nonsignaling", r.is_nonsignaling},
              {"is_synchronous", r.is_synchronous},
              {"max_violation", r.max_violation},
              {"residuals",
               Json{{"nonnegativity", r.nonnegativity_residual},
                    {"normalization", r.normalization_residual},
                    {"nonsignaling", r.nonsignaling_residual},
                    {"synchronicity", r.synchronicity_residual}}}};
}

void emit(const Json& j) { std::cout << j.dump() << "\n"; }

std::vector<SliceQuery> default_queries() {
  std::vector<SliceQuery> queries;
  Rng rng(20240601);
  for (int k = 0; k < 12; ++k) {
    SliceQuery q;
    q.n = 3;
    q.y.resize(3);
    for (int i = 0; i < 3; ++i) q.y(i) = 0.35 + 0.3 * rng.uniform();
    q.x.resize(3);
    for (int e = 0; e < 3; ++e) {
      const double mag = 0.5 + rng.uniform();
      q.x(e) = rng.uniform() < 0.5 ? -mag : mag;
    }
    q.cls = CorrClass::q;
    q.side = k % 2 ? Side::lower : Side::upper;
    queries.push_back(std::move(q));
  }
  return queries;
}

struct SliceOptions {
  std::string y_csv, x_csv;
  std::string cls = "q";
  std::string side = "upper";
  std::string emit_model;
};

int run_slice(const SliceOptions& opt) {
  const auto y = parse_list(opt.y_csv);
  const auto x = parse_list(opt.x_csv);
  SliceQuery query;
  query.n = static_cast<int>(y.size());
  query.y = Eigen::Map<const Eigen::VectorXd>(y.data(), y.size());
  if (static_cast<int>(x.size()) != pair_count(query.n))
    throw ConstraintError("shape", "--x needs n(n-1)/2 entries");
  query.x = Eigen::Map<const Eigen::VectorXd>(x.data(), x.size());
  if (opt.cls == "q")
    query.cls = CorrClass::q;
  else if (opt.cls == "loc")
    query.cls = CorrClass::loc;
  else
    throw ConstraintError("format", "--class must be q or loc");
  if (opt.side == "upper")
    query.side = Side::upper;
  else if (opt.side == "lower")
    query.side = Side::lower;
  else
    throw ConstraintError("format", "--side must be upper or lower");

  const SliceResult res =
      query.cls == CorrClass::q ? slice_q3(query) : slice_local(query);

  Json summary{{"value", res.value},
               {"degenerate_path", res.degenerate_path},
               {"weights", res.weights},
               {"achieved_w", std::vector<double>(
                                  res.achieved_w.data(),
                                  res.achieved_w.data() + res.achieved_w.size())}};
  if (!opt.emit_model.empty()) {
    write_json_file(opt.emit_model, model_to_json(res.realizing_model));
    summary["model"] = opt.emit_model;
  }
  emit(summary);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"synchronous two-outcome correlation sets: validation, maps, "
               "tracial models, and exact three-question slice bounds"};
  app.require_subcommand(1);

  double tol = kDefaultTol;
  app.add_option("--tol", tol, "validation tolerance")->capture_default_str();

  int exit_code = 0;

  // validate <corr.json>
  std::string validate_path;
  auto* cmd_validate =
      app.add_subcommand("validate", "classify a correlation tensor file");
  cmd_validate->add_option("file", validate_path, "tensor JSON")->required();
  cmd_validate->callback([&] {
    const ClassReport r =
        validate(tensor_from_json(read_json_file(validate_path)), tol);
    emit(report_to_json(r));
    exit_code = r.all() ? 0 : 1;
  });

  // map --to-matrix|--to-tensor <file> [--out]
  std::string map_path, map_out;
  bool to_matrix = false, to_tensor = false;
  auto* cmd_map = app.add_subcommand(
      "map", "convert between tensor and matrix forms of a synchronous "
             "two-outcome correlation");
  cmd_map->add_option("file", map_path, "input JSON")->required();
  auto* flag_tm = cmd_map->add_flag("--to-matrix", to_matrix,
                                    "tensor file -> matrix file");
  cmd_map->add_flag("--to-tensor", to_tensor, "matrix file -> tensor file")
      ->excludes(flag_tm);
  cmd_map->add_option("--out", map_out, "artifact path");
  cmd_map->callback([&] {
    if (!to_matrix && !to_tensor)
      throw ConstraintError("usage", "pick one of --to-matrix, --to-tensor");
    Json artifact;
    Json summary;
    if (to_matrix) {
      const RestrictResult r =
          restrict_to_matrix(tensor_from_json(read_json_file(map_path)), tol);
      artifact = matrix_to_json(r.matrix);
      summary = Json{{"n", r.matrix.n}, {"asymmetry", r.asymmetry}};
    } else {
      const CorrelationTensor t =
          expand(matrix_from_json(read_json_file(map_path)), tol);
      artifact = tensor_to_json(t);
      summary = Json{{"n", t.n}, {"m", t.m}};
    }
    if (map_out.empty()) {
      summary["result"] = artifact;
    } else {
      write_json_file(map_out, artifact);
      summary["out"] = map_out;
    }
    emit(summary);
  });

  // embed [--m M] <corr.json> [--out]
  std::string embed_path, embed_out;
  int embed_m = 0;
  auto* cmd_embed = app.add_subcommand(
      "embed", "embed an (n,m) synchronous correlation into a two-outcome "
               "correlation over n*m questions");
  cmd_embed->add_option("file", embed_path, "tensor JSON")->required();
  cmd_embed->add_option("--m", embed_m,
                        "expected outcome count (checked against the file)");
  cmd_embed->add_option("--out", embed_out, "artifact path");
  cmd_embed->callback([&] {
    const CorrelationTensor q = tensor_from_json(read_json_file(embed_path));
    if (embed_m > 0 && embed_m != q.m)
      throw ConstraintError("shape", "--m disagrees with the file");
    const CorrelationTensor p = embed_outcomes(q, tol);
    Json summary{{"n", p.n}, {"m", p.m}};
    if (embed_out.empty()) {
      summary["result"] = tensor_to_json(p);
    } else {
      write_json_file(embed_out, tensor_to_json(p));
      summary["out"] = embed_out;
    }
    emit(summary);
  });

  // project --n N --m M <corr.json> [--out]
  std::string project_path, project_out;
  int project_n = 0, project_m = 0;
  auto* cmd_project = app.add_subcommand(
      "project", "read the (n,m) correlation off a two-outcome correlation "
                 "over n*m questions, reporting class membership");
  cmd_project->add_option("file", project_path, "tensor JSON")->required();
  cmd_project->add_option("--n", project_n, "question count")->required();
  cmd_project->add_option("--m", project_m, "outcome count")->required();
  cmd_project->add_option("--out", project_out, "artifact path");
  cmd_project->callback([&] {
    const ProjectionReport r = project_outcomes(
        tensor_from_json(read_json_file(project_path)), project_n, project_m,
        tol);
    Json summary{{"in_class", r.in_class}};
    if (r.in_class) {
      if (project_out.empty()) {
        summary["result"] = tensor_to_json(*r.tensor);
      } else {
        write_json_file(project_out, tensor_to_json(*r.tensor));
        summary["out"] = project_out;
      }
    } else {
      summary["violated"] = r.violated;
      summary["residual"] = r.residual;
    }
    emit(summary);
    exit_code = r.in_class ? 0 : 1;
  });

  // synth <model.json> [--out]
  std::string synth_path, synth_out;
  auto* cmd_synth = app.add_subcommand(
      "synth", "synthesize the correlation of a tracial model file");
  cmd_synth->add_option("file", synth_path, "model JSON")->required();
  cmd_synth->add_option("--out", synth_out, "artifact path");
  cmd_synth->callback([&] {
    const CorrelationTensor t =
        synthesize(model_from_json(read_json_file(synth_path)), tol);
    const ClassReport r = validate(t, tol);
    Json summary{{"n", t.n}, {"m", t.m}, {"validate", report_to_json(r)}};
    if (synth_out.empty()) {
      summary["result"] = tensor_to_json(t);
    } else {
      write_json_file(synth_out, tensor_to_json(t));
      summary["out"] = synth_out;
    }
    emit(summary);
  });

  // slice --y ... --x ... [--class] [--side] [--emit-model]
  SliceOptions slice_opt;
  auto* cmd_slice = app.add_subcommand(
      "slice", "exact slice bound over the class-q or local set");
  cmd_slice->add_option("--y", slice_opt.y_csv, "diagonal, comma list")
      ->required();
  cmd_slice
      ->add_option("--x", slice_opt.x_csv,
                   "pair weights x01,x02,x12 (lexicographic)")
      ->required();
  cmd_slice->add_option("--class", slice_opt.cls, "q or loc")
      ->capture_default_str();
  cmd_slice->add_option("--side", slice_opt.side, "upper or lower")
      ->capture_default_str();
  cmd_slice->add_option("--emit-model", slice_opt.emit_model,
                        "write the realizing model here");
  cmd_slice->callback([&] { exit_code = run_slice(slice_opt); });

  // sample --n N --dim D --count K --seed S --out csv [--serial]
  int sample_n = 3, sample_dim = 4, sample_count = 1000;
  std::uint64_t sample_seed = 1;
  std::string sample_out = "samples.csv";
  bool sample_serial = false;
  auto* cmd_sample = app.add_subcommand(
      "sample", "draw (diagonal, upper-triangle) samples from random "
                "finite-dimensional models");
  cmd_sample->add_option("--n", sample_n, "questions")->capture_default_str();
  cmd_sample->add_option("--dim", sample_dim, "max block dimension")
      ->capture_default_str();
  cmd_sample->add_option("--count", sample_count, "sample count")
      ->capture_default_str();
  cmd_sample->add_option("--seed", sample_seed, "seed")->capture_default_str();
  cmd_sample->add_option("--out", sample_out, "CSV path")
      ->capture_default_str();
  cmd_sample->add_flag("--serial", sample_serial,
                       "use the serial reference kernel");
  cmd_sample->callback([&] {
    const auto start = std::chrono::steady_clock::now();
    const auto samples =
        sample_dq(sample_n, sample_dim, sample_count, sample_seed,
                  sample_serial ? Exec::serial : Exec::parallel);
    write_samples_csv(sample_out, samples, sample_n);
    const double ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start)
                          .count();
    emit(Json{{"n", sample_n},
              {"dim", sample_dim},
              {"count", sample_count},
              {"seed", sample_seed},
              {"out", sample_out},
              {"elapsed_ms", ms}});
  });

  // verify-universal3 --a A --b B | --grid [--random N] [--seed S] [--out]
  double u3_a = 0.0, u3_b = 0.0;
  bool u3_grid = false;
  int u3_random = 100;
  std::uint64_t u3_seed = 424242;
  std::string u3_out;
  auto* cmd_u3 = app.add_subcommand(
      "verify-universal3",
      "check the three-projection construction at one direction or over "
      "the standard grid");
  auto* opt_a = cmd_u3->add_option("--a", u3_a, "first pair weight");
  auto* opt_b = cmd_u3->add_option("--b", u3_b, "second pair weight");
  cmd_u3->add_flag("--grid", u3_grid, "run the verification grid")
      ->excludes(opt_a)
      ->excludes(opt_b);
  cmd_u3->add_option("--random", u3_random,
                     "extra random directions for --grid")
      ->capture_default_str();
  cmd_u3->add_option("--seed", u3_seed, "seed for the random directions")
      ->capture_default_str();
  cmd_u3->add_option("--out", u3_out, "write the rep dump here (point mode)");
  cmd_u3->callback([&] {
    if (u3_grid) {
      const auto start = std::chrono::steady_clock::now();
      auto points = standard_grid();
      const auto extra = random_directions(u3_random, u3_seed);
      points.insert(points.end(), extra.begin(), extra.end());
      const auto checks = verify_grid(points);
      int valid = 0;
      double max_residual = 0.0, max_central = 0.0;
      bool unique = true;
      for (const GridPointCheck& c : checks) {
        if (!c.has_m2) continue;
        ++valid;
        max_residual = std::max(max_residual, c.max_residual);
        max_central = std::max(max_central, c.central_residual);
        if (!(c.loser_residual > kResidualGate || c.branches_coincide))
          unique = false;
      }
      const double ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - start)
                            .count();
      const bool pass = max_residual <= kResidualGate &&
                        max_central <= kResidualGate && unique;
      emit(Json{{"points", checks.size()},
                {"valid", valid},
                {"max_residual", max_residual},
                {"max_central_residual", max_central},
                {"unique_branch", unique},
                {"pass", pass},
                {"elapsed_ms", ms}});
      exit_code = pass ? 0 : 1;
      return;
    }
    if (u3_a == 0.0 || u3_b == 0.0)
      throw ConstraintError("direction",
                            "point mode needs nonzero --a and --b");
    const Universal3Rep rep = build_rep(u3_a, u3_b);
    Json summary{{"a", rep.a},
                 {"b", rep.b},
                 {"t", rep.t},
                 {"has_m2", rep.has_m2},
                 {"atoms", rep.atoms.size()}};
    bool pass = true;
    if (rep.has_m2) {
      const RepReport r = verify_rep(rep);
      summary["z"] = rep.z;
      summary["max_residual"] = r.max_residual();
      summary["loser_residual"] = rep.loser_residual;
      summary["central_residual"] = central_element_residual(rep);
      pass = r.max_residual() <= kResidualGate &&
             (rep.loser_residual > kResidualGate || rep.branches_coincide);
    }
    summary["pass"] = pass;
    if (!u3_out.empty()) {
      write_json_file(u3_out, rep_to_json(rep));
      summary["out"] = u3_out;
    }
    emit(summary);
    exit_code = pass ? 0 : 1;
  });

  // dominate --samples s.csv [--queries q.json] [--delta] [--out]
  std::string dom_samples, dom_queries, dom_out = "dominance.csv";
  double dom_delta = 0.05, dom_tol = 1e-9;
  auto* cmd_dom = app.add_subcommand(
      "dominate", "check sampled points against exact slice bounds");
  cmd_dom->add_option("--samples", dom_samples, "sample CSV")->required();
  cmd_dom->add_option("--queries", dom_queries,
                      "query JSON (defaults to a built-in central suite)");
  cmd_dom->add_option("--delta", dom_delta, "neighborhood radius")
      ->capture_default_str();
  cmd_dom->add_option("--dominance-tol", dom_tol, "pass threshold on excess")
      ->capture_default_str();
  cmd_dom->add_option("--out", dom_out, "report CSV path")
      ->capture_default_str();
  cmd_dom->callback([&] {
    int n = 0;
    const auto samples = read_samples_csv(dom_samples, &n);
    const auto queries = dom_queries.empty()
                             ? default_queries()
                             : queries_from_json(read_json_file(dom_queries));
    const auto entries = dominance_check(samples, queries, dom_delta);
    write_dominance_csv(dom_out, entries);

    double max_excess = -1e300;
    int no_data = 0;
    for (const DominanceEntry& e : entries) {
      if (e.no_data)
        ++no_data;
      else
        max_excess = std::max(max_excess, e.max_excess);
    }
    const bool clean = no_data == 0 && max_excess <= dom_tol;
    emit(Json{{"queries", entries.size()},
              {"samples", samples.size()},
              {"delta", dom_delta},
              {"max_excess", max_excess},
              {"no_data", no_data},
              {"clean", clean},
              {"out", dom_out}});
    exit_code = clean ? 0 : 1;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const ConstraintError& e) {
    emit(Json{{"error", e.what()}, {"constraint", e.constraint()}});
    return 2;
  } catch (const std::exception& e) {
    emit(Json{{"error", e.what()}});
    return 2;
  }
  return exit_code;
}
