#include "shortck/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>

#include "shortck/error.hpp"
#include "shortck/io.hpp"
#include "shortck/parallel.hpp"
#include "shortck/render.hpp"

namespace shortck::cli {

namespace {

using io::get;
using io::get_or;
using io::json;

struct Globals {
  std::string config;
  std::string out;
  int threads = 0;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

struct Ctx {
  json cfg;
  int threads = 1;
  std::string out;
  bool quiet = false;
  std::ostream* err = nullptr;
};

std::uint64_t require_seed(const json& cfg) {
  if (!cfg.contains("seed")) throw UsageError("randomized subcommand needs an explicit 'seed'");
  return get<std::uint64_t>(cfg, "seed");
}

std::vector<PointK> points_of(const json& cfg) {
  std::vector<PointK> xs;
  if (cfg.contains("points")) {
    for (const auto& p : get<json>(cfg, "points")) xs.push_back(io::point_from(p));
  } else {
    xs.push_back(io::point_from(get<json>(cfg, "point")));
  }
  return xs;
}

// Single "point" yields an object, "points" an array.
json one_or_many(const json& cfg, json arr) { return cfg.contains("points") ? arr : arr.at(0); }

std::vector<double> double_list(const json& cfg, const char* key) { return get<std::vector<double>>(cfg, key); }

std::pair<int, int> range_of(const json& cfg) {
  const auto v = get<std::vector<int>>(cfg, "n_range");
  if (v.size() != 2) throw UsageError("n_range must be [lo, hi]");
  return {v[0], v[1]};
}

json cmd_green(const Ctx& c) {
  const auto seq = io::sequence_from_config(c.cfg);
  const auto est = io::estimator_from(c.cfg, seq);
  const auto xs = points_of(c.cfg);
  json arr = json::array();
  if (c.cfg.contains("points") && seq.dim() == 2) {
    for (const auto& g : green_batch(seq, xs, est, c.threads)) arr.push_back(io::to_json(g));
  } else {
    for (const auto& x : xs) arr.push_back(io::to_json(green_estimate(seq, x, est)));
  }
  return one_or_many(c.cfg, arr);
}

json cmd_classify(const Ctx& c) {
  const auto seq = io::sequence_from_config(c.cfg);
  const auto est = io::estimator_from(c.cfg, seq);
  const auto xs = points_of(c.cfg);
  const int budget = get_or<int>(c.cfg, "budget", 0);
  std::vector<ClassifiedPoint> res(xs.size());
  parallel_for(xs.size(), c.threads, [&](std::size_t i) { res[i] = classify(seq, xs[i], est, budget); });
  json arr = json::array();
  for (const auto& r : res) arr.push_back(io::to_json(r));
  return one_or_many(c.cfg, arr);
}

json cmd_sublevel(const Ctx& c) {
  const auto seq = io::sequence_from_config(c.cfg);
  const auto est = io::estimator_from(c.cfg, seq);
  const double r = get<double>(c.cfg, "r");
  if (!(r > 0.0)) throw UsageError("sublevel r must be positive");
  const auto xs = points_of(c.cfg);
  json arr = json::array();
  if (seq.dim() == 2) {
    for (const auto& s : sublevel_batch(seq, r, xs, est, c.threads)) arr.push_back(io::to_json(s));
  } else {
    for (const auto& x : xs) arr.push_back(io::to_json(sublevel_from_green(green_estimate(seq, x, est), r)));
  }
  return one_or_many(c.cfg, arr);
}

RenderConfig render_config_from(const json& cfg) {
  RenderConfig rc;
  const json slice = get_or<json>(cfg, "slice", json::object());
  const std::string mode = get_or<std::string>(slice, "mode", "fix_w");
  if (mode == "fix_w") {
    rc.mode = SliceMode::fix_w;
    if (slice.contains("w")) rc.w_fixed = io::complex_from(slice.at("w"));
  } else if (mode == "fix_line") {
    rc.mode = SliceMode::fix_line;
    const json base = get<json>(slice, "base"), dir = get<json>(slice, "direction");
    if (!base.is_array() || base.size() != 2 || !dir.is_array() || dir.size() != 2)
      throw UsageError("fix_line needs base and direction in C^2");
    rc.base_z = io::complex_from(base[0]);
    rc.base_w = io::complex_from(base[1]);
    rc.dir_z = io::complex_from(dir[0]);
    rc.dir_w = io::complex_from(dir[1]);
  } else {
    throw UsageError("unknown slice mode: " + mode);
  }
  const json win = get_or<json>(cfg, "window", json::object());
  if (win.contains("center")) rc.center = io::complex_from(win.at("center"));
  rc.width = get_or<double>(win, "width", rc.width);
  rc.height = get_or<double>(win, "height", rc.height);
  rc.nx = get_or<int>(cfg, "nx", rc.nx);
  rc.ny = get_or<int>(cfg, "ny", rc.ny);
  const std::string q = get_or<std::string>(cfg, "quantity", "green");
  if (q == "green") rc.quantity = RenderQuantity::green;
  else if (q == "classify") rc.quantity = RenderQuantity::classify;
  else if (q == "envelope") rc.quantity = RenderQuantity::envelope;
  else throw UsageError("unknown quantity: " + q);
  rc.green_max = get_or<double>(cfg, "green_max", 0.0);
  const json env = get_or<json>(cfg, "envelope", json::object());
  rc.envelope_n = get_or<int>(env, "n", rc.envelope_n);
  rc.envelope_slack = get_or<double>(env, "slack", rc.envelope_slack);
  if (rc.nx < 1 || rc.ny < 1) throw UsageError("nx and ny must be at least 1");
  if (!(rc.width > 0.0) || !(rc.height > 0.0)) throw UsageError("window width and height must be positive");
  return rc;
}

std::string csv_path_for(const std::string& pgm) {
  const auto dot = pgm.rfind('.');
  const auto slash = pgm.rfind('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return pgm + ".csv";
  return pgm.substr(0, dot) + ".csv";
}

json cmd_render(Ctx& c) {
  const RenderConfig rc = render_config_from(c.cfg);
  const auto seq = io::sequence_from_config(c.cfg);
  const auto est = io::estimator_from(c.cfg, seq);
  const json outs = get_or<json>(c.cfg, "outputs", json::object());
  std::string pgm = get_or<std::string>(outs, "pgm", "");
  std::string csv = get_or<std::string>(outs, "csv", "");
  if (!c.out.empty()) {
    pgm = c.out;
    if (csv.empty()) csv = csv_path_for(pgm);
  }
  // The report goes to stdout; --out names the image.
  c.out.clear();
  const GridOutput g = render_slice(seq, rc, est, c.threads);
  if (!pgm.empty()) write_pgm(g, pgm);
  if (!csv.empty()) write_csv(g, rc, csv);
  long counts[3] = {0, 0, 0};
  for (auto code : g.codes) ++counts[code];
  return {{"nx", g.nx},
          {"ny", g.ny},
          {"quantity", to_string(rc.quantity)},
          {"slice_mode", to_string(rc.mode)},
          {"green_max", io::num(g.green_max)},
          {"counts", {{"zero", counts[0]}, {"escaped", counts[1]}, {"undecided", counts[2]}}},
          {"pgm", pgm.empty() ? json(nullptr) : json(pgm)},
          {"csv", csv.empty() ? json(nullptr) : json(csv)}};
}

std::pair<cplx, cplx> target_of(const json& j) {
  if (!j.is_array() || j.size() != 2) throw UsageError("target must be [z, w]");
  return {io::complex_from(j[0]), io::complex_from(j[1])};
}

json cmd_loewner_monotone(const Ctx& c) {
  const auto fam = io::family_from(get<json>(c.cfg, "family"));
  const std::uint64_t seed = require_seed(c.cfg);
  const int samples = get_or<int>(c.cfg, "samples", 1000);
  return io::to_json(certify_monotone(fam, get<double>(c.cfg, "t"), get<double>(c.cfg, "s"), samples, seed));
}

json cmd_loewner_union(const Ctx& c) {
  const auto fam = io::family_from(get<json>(c.cfg, "family"));
  const double t = get<double>(c.cfg, "t");
  const auto [z, w] = target_of(get<json>(c.cfg, "target"));
  return io::to_json(certify_union(fam, t, z, w));
}

json cmd_loewner_intersection(const Ctx& c) {
  const auto fam = io::family_from(get<json>(c.cfg, "family"));
  const double t = get<double>(c.cfg, "t");
  const auto [z, w] = target_of(get<json>(c.cfg, "target"));
  const auto steps = double_list(c.cfg, "t_steps");
  return io::to_json(certify_intersection(fam, t, z, w, steps));
}

json cmd_loewner_chain(const Ctx& c) {
  const auto seq = io::sequence_from_config(c.cfg);
  const std::uint64_t seed = require_seed(c.cfg);
  std::vector<double> grid;
  if (c.cfg.contains("t_grid")) {
    grid = double_list(c.cfg, "t_grid");
  } else {
    for (int i = 0; i <= 10; ++i) grid.push_back(i / 10.0);
  }
  return io::to_json(certify_chain(seq, get<int>(c.cfg, "n"), grid, get_or<double>(c.cfg, "r", 0.0),
                                   get_or<long>(c.cfg, "samples", 1000), seed));
}

json cmd_decompose(const Ctx& c) {
  const MapSpec h = io::map_from(get<json>(c.cfg, "map"));
  const auto dec = build_decomposition(h, get<double>(c.cfg, "r"), get<int>(c.cfg, "N"), get<double>(c.cfg, "delta"),
                                       get<double>(c.cfg, "c"));
  json o{{"decomposition", io::to_json(dec)}};
  const json nest = get_or<json>(c.cfg, "nesting", json::object());
  const long samples = get_or<long>(nest, "samples", 0);
  if (samples > 0) {
    const std::uint64_t seed = require_seed(c.cfg);
    o["nesting"] =
        io::to_json(check_nesting(dec, samples, get_or<double>(nest, "box_radius", 4.0), seed, c.threads));
  }
  return o;
}

json with_validation(const Schedule& s) {
  return {{"schedule", io::to_json(s)}, {"validation", io::to_json(validate_schedule(s))}};
}

json cmd_schedule_gen_short(const Ctx& c) {
  const double cc = get<double>(c.cfg, "c");
  if (c.cfg.contains("eps")) {
    const auto eps = double_list(c.cfg, "eps");
    return with_validation(gen_short_schedule(cc, eps));
  }
  return with_validation(gen_short_schedule(cc, get<double>(c.cfg, "eps_const"), get<int>(c.cfg, "N")));
}

json cmd_schedule_gen_fb(const Ctx& c) {
  return with_validation(gen_fb_schedule(get<double>(c.cfg, "c"), get<int>(c.cfg, "N")));
}

json cmd_schedule_validate(const Ctx& c) { return with_validation(io::schedule_from(get<json>(c.cfg, "schedule"))); }

json cmd_schedule_claim(const Ctx& c) {
  return io::to_json(verify_claim_tl(get<double>(c.cfg, "t"), get<int>(c.cfg, "l_max")));
}

json cmd_schedule_inclusion(const Ctx& c) {
  const Schedule s = io::schedule_from(get<json>(c.cfg, "schedule"));
  return io::to_json(verify_inclusion_delta(s, get<double>(c.cfg, "r"), get<double>(c.cfg, "r_prime"),
                                            get<int>(c.cfg, "n"), get<int>(c.cfg, "l_max"),
                                            get_or<bool>(c.cfg, "find_minimal", false),
                                            get_or<int>(c.cfg, "boundary_samples", 100)));
}

json cmd_schedule_growth(const Ctx& c) {
  const Schedule s = io::schedule_from(get<json>(c.cfg, "schedule"));
  return io::to_json(growth_series(s, get<int>(c.cfg, "n_max")));
}

json cmd_envelope(const Ctx& c) {
  const auto seq = io::sequence_from_config(c.cfg);
  const auto est = io::estimator_from(c.cfg, seq);
  const auto xs = points_of(c.cfg);
  const int n = get_or<int>(c.cfg, "n", 20);
  const double slack = get_or<double>(c.cfg, "slack", 1e-9);
  std::vector<EnvelopeMembership> res(xs.size());
  parallel_for(xs.size(), c.threads, [&](std::size_t i) { res[i] = envelope_membership(seq, xs[i], est, n, slack); });
  json arr = json::array();
  for (const auto& r : res) arr.push_back(io::to_json(r));
  return one_or_many(c.cfg, arr);
}

json cmd_fb1(const Ctx& c) {
  const auto [lo, hi] = range_of(c.cfg);
  return io::to_json(verify_fb1(get<double>(c.cfg, "c"), get<double>(c.cfg, "t"), get<double>(c.cfg, "b"), lo, hi,
                                get<int>(c.cfg, "k_max"), get<double>(c.cfg, "K_radius"),
                                get_or<int>(c.cfg, "grid", 32), c.threads));
}

json cmd_fb3(const Ctx& c) {
  const auto [lo, hi] = range_of(c.cfg);
  const Schedule s = io::schedule_from(get<json>(c.cfg, "schedule"));
  return io::to_json(verify_fb3(s, get<double>(c.cfg, "b"), lo, hi, get<int>(c.cfg, "k_max"),
                                get<double>(c.cfg, "K_radius"), get_or<int>(c.cfg, "grid", 32), c.threads));
}

json cmd_volume(const Ctx& c) {
  const auto seq = io::sequence_from_config(c.cfg);
  const auto est = io::estimator_from(c.cfg, seq);
  const std::uint64_t seed = require_seed(c.cfg);
  return io::to_json(volume_probe(seq, get<double>(c.cfg, "r"), double_list(c.cfg, "R_list"),
                                  get<long>(c.cfg, "samples"), seed, est, c.threads));
}

json cmd_kobayashi(const Ctx& c) {
  const auto seq = io::sequence_from_config(c.cfg);
  const auto est = io::estimator_from(c.cfg, seq);
  const std::uint64_t seed = require_seed(c.cfg);
  std::vector<double> radii;
  if (c.cfg.contains("ball_ln_radii")) radii = double_list(c.cfg, "ball_ln_radii");
  return io::to_json(kobayashi_probe(seq, io::point_from(get<json>(c.cfg, "point")),
                                     io::point_from(get<json>(c.cfg, "direction")), get<std::vector<int>>(c.cfg, "n_list"),
                                     radii, get_or<int>(c.cfg, "samples_per_n", 50), seed, est));
}

void add_globals(CLI::App* app, Globals& g) {
  app->add_option("--config", g.config, "JSON config file");
  app->add_option("--out", g.out, "output path (render: PGM image)");
  app->add_option("--threads", g.threads, "worker threads (default: SHORTCK_THREADS or all cores)");
  app->add_option("--seed", g.seed, "override the config seed");
  app->add_flag("--quiet", g.quiet, "suppress diagnostics");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"shortck: non-autonomous basins, Green functions, Loewner families and schedules"};
  app.require_subcommand(1);
  Globals g;
  add_globals(&app, g);

  using Handler = std::function<json(Ctx&)>;
  std::string chosen;
  Handler handler;
  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& desc, Handler h) {
    CLI::App* sub = parent->add_subcommand(name, desc);
    sub->fallthrough();
    sub->callback([&, name, h, parent] {
      chosen = parent == &app ? name : parent->get_name() + " " + name;
      handler = h;
    });
    return sub;
  };
  auto group = [&](const std::string& name, const std::string& desc) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->fallthrough();
    sub->require_subcommand(1);
    return sub;
  };

  leaf(&app, "green", "Green function estimate", [](Ctx& c) { return cmd_green(c); });
  leaf(&app, "classify", "basin classification", [](Ctx& c) { return cmd_classify(c); });
  leaf(&app, "render", "render a complex slice to PGM and CSV", [](Ctx& c) { return cmd_render(c); });
  leaf(&app, "sublevel", "sublevel membership G < r", [](Ctx& c) { return cmd_sublevel(c); });
  CLI::App* lw = group("loewner-certify", "deformation family certificates");
  leaf(lw, "monotone", "monotone inclusion", [](Ctx& c) { return cmd_loewner_monotone(c); });
  leaf(lw, "union", "union witness", [](Ctx& c) { return cmd_loewner_union(c); });
  leaf(lw, "intersection", "closure limit", [](Ctx& c) { return cmd_loewner_intersection(c); });
  leaf(lw, "chain", "chain over a scheduled level", [](Ctx& c) { return cmd_loewner_chain(c); });
  leaf(&app, "decompose", "sublevel decomposition of a Henon map", [](Ctx& c) { return cmd_decompose(c); });
  CLI::App* sc = group("schedule", "coefficient schedules");
  leaf(sc, "gen-short", "short-regime schedule", [](Ctx& c) { return cmd_schedule_gen_short(c); });
  leaf(sc, "gen-fb", "fb-regime schedule", [](Ctx& c) { return cmd_schedule_gen_fb(c); });
  leaf(sc, "validate", "validate a schedule", [](Ctx& c) { return cmd_schedule_validate(c); });
  leaf(sc, "claim-tl", "t^l > (l+1)/2 claim", [](Ctx& c) { return cmd_schedule_claim(c); });
  leaf(sc, "inclusion", "bidisc inclusion chain", [](Ctx& c) { return cmd_schedule_inclusion(c); });
  leaf(sc, "growth", "growth series", [](Ctx& c) { return cmd_schedule_growth(c); });
  leaf(&app, "envelope", "psh envelope sign", [](Ctx& c) { return cmd_envelope(c); });
  CLI::App* fb = group("fb-verify", "orbit-supremum lemmas");
  leaf(fb, "fb1", "geometric schedule lemma", [](Ctx& c) { return cmd_fb1(c); });
  leaf(fb, "fb3", "fb schedule lemma", [](Ctx& c) { return cmd_fb3(c); });
  leaf(&app, "volume-probe", "Monte-Carlo volume growth", [](Ctx& c) { return cmd_volume(c); });
  leaf(&app, "kobayashi", "Kobayashi length upper bounds", [](Ctx& c) { return cmd_kobayashi(c); });

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "shortck: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    Ctx c;
    c.cfg = g.config.empty() ? json::object() : io::parse_file(g.config);
    if (!c.cfg.is_object()) throw UsageError("config must be a JSON object");
    if (g.seed) c.cfg["seed"] = *g.seed;
    c.threads = resolve_threads(g.threads);
    c.out = g.out;
    c.quiet = g.quiet;
    c.err = &err;
    const json result = handler(c);
    const json report{{"version", io::kVersion}, {"command", chosen}, {"config", c.cfg}, {"result", result}};
    const std::string text = report.dump(2) + "\n";
    if (c.out.empty()) {
      out << text;
    } else {
      std::ofstream f(c.out);
      if (!(f << text)) throw Error("cannot write " + c.out);
      if (!c.quiet) err << "wrote " << c.out << "\n";
    }
    return kExitOk;
  } catch (const UsageError& e) {
    err << "shortck: " << e.what() << "\n";
    return kExitUsage;
  } catch (const json::exception& e) {
    err << "shortck: config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "shortck: " << e.what() << "\n";
    return kExitFailure;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace shortck::cli
