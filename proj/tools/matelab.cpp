// Command-line surface: reproducible, file-emitting experiments over the
// samplers and verification suites.  Exit codes: 0 success, 1 statistical
// failure, 2 usage/config error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>

#include "matelab/driving.hpp"
#include "matelab/exponents.hpp"
#include "matelab/gff.hpp"
#include "matelab/io.hpp"
#include "matelab/levy.hpp"
#include "matelab/peanosphere.hpp"
#include "matelab/stochastic.hpp"
#include "matelab/surface.hpp"
#include "matelab/verify.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace matelab;

namespace {

struct ParamSet {
  std::map<std::string, std::string> values;  // resolved key=value
  std::map<std::string, CLI::Option*> options;

  void bind(CLI::App* cmd, const std::string& key, std::string* target,
            const std::string& help) {
    values[key] = *target;
    options[key] = cmd->add_option("--" + key, *target, help);
  }

  // Config-file values fill in whatever the command line left untouched.
  void merge_config(const std::string& path,
                    const std::set<std::string>& reserved) {
    Config cfg = read_config(path);
    for (const auto& [k, v] : cfg) {
      if (reserved.count(k)) continue;
      auto it = options.find(k);
      if (it == options.end())
        throw std::invalid_argument("unknown config key: " + k);
      if (it->second->count() == 0) {
        it->second->add_result(v);
        it->second->run_callback();
      }
    }
  }
};

std::uint64_t default_seed() {
  if (const char* env = std::getenv("MATELAB_SEED"))
    return std::strtoull(env, nullptr, 10);
  return 20260801ull;
}

void write_manifest(const fs::path& out_dir, const std::string& command,
                    std::uint64_t seed, std::size_t streams, bool serial,
                    const std::map<std::string, std::string>& params) {
  Config m;
  m["command"] = command;
  m["seed"] = std::to_string(seed);
  m["streams"] = std::to_string(streams);
  m["serial"] = serial ? "1" : "0";
  for (const auto& [k, v] : params) m[k] = v;
  write_config(m, (out_dir / "manifest.cfg").string());
}

void write_json(const json& j, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  out << j.dump(2) << "\n";
}

json check_to_json(const CheckResult& c) {
  json j;
  j["name"] = c.name;
  j["statistic"] = c.statistic;
  j["target"] = c.target;
  j["tolerance"] = c.tolerance;
  j["pass"] = c.pass;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"matelab: peanosphere, LQG surface and exponent laboratory"};
  app.require_subcommand(1);

  std::uint64_t seed = default_seed();
  std::size_t streams = 1;
  std::string out_dir = ".";
  std::string config_path;
  bool serial = false;
  app.add_option("--seed", seed, "base seed (default MATELAB_SEED)");
  app.add_option("--streams", streams, "replica count where applicable");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--config", config_path, "key=value config file");
  app.add_flag("--serial", serial, "run replicas serially");

  const std::set<std::string> reserved = {"command", "seed", "streams",
                                          "serial", "out"};

  struct Cmd {
    CLI::App* cli = nullptr;
    ParamSet params;
    std::function<int(const fs::path&)> run;
  };
  std::map<std::string, Cmd> cmds;

  auto p = [&](const Cmd& c, const std::string& key) {
    return c.params.options.at(key)->as<std::string>().empty()
               ? c.params.values.at(key)
               : c.params.options.at(key)->as<std::string>();
  };
  (void)p;

  // --- bm ---
  {
    Cmd& c = cmds["bm"];
    c.cli = app.add_subcommand("bm", "Brownian path");
    static std::string n = "100000", dt = "0.001", drift = "0",
                       var_rate = "1";
    c.params.bind(c.cli, "n", &n, "steps");
    c.params.bind(c.cli, "dt", &dt, "time step");
    c.params.bind(c.cli, "drift", &drift, "drift rate");
    c.params.bind(c.cli, "var-rate", &var_rate, "variance rate");
    c.run = [&](const fs::path& dir) {
      TimeSeries s = sample_bm(RngStream(seed, 1), std::stoull(n),
                               parse_rational(dt), parse_rational(drift),
                               parse_rational(var_rate));
      write_csv(s, (dir / "bm.csv").string());
      return 0;
    };
  }
  // --- bessel ---
  {
    Cmd& c = cmds["bessel"];
    c.cli = app.add_subcommand("bessel", "Bessel path, exact transitions");
    static std::string delta = "1.5", x0 = "1", n = "100000", dt = "0.001",
                       policy = "reflect";
    c.params.bind(c.cli, "delta", &delta, "dimension");
    c.params.bind(c.cli, "x0", &x0, "start value");
    c.params.bind(c.cli, "n", &n, "steps");
    c.params.bind(c.cli, "dt", &dt, "time step");
    c.params.bind(c.cli, "policy", &policy, "absorb|reflect");
    c.run = [&](const fs::path& dir) {
      BesselParams bp{parse_rational(delta), parse_rational(x0)};
      ZeroPolicy zp = policy == "absorb" ? ZeroPolicy::absorb
                                         : ZeroPolicy::reflect;
      TimeSeries s = sample_bessel(RngStream(seed, 2), bp, std::stoull(n),
                                   parse_rational(dt), zp);
      write_csv(s, (dir / "bessel.csv").string());
      return 0;
    };
  }
  // --- stable ---
  {
    Cmd& c = cmds["stable"];
    c.cli = app.add_subcommand("stable", "totally asymmetric stable path");
    static std::string alpha = "1.5", n = "100000", dt = "0.001",
                       sign = "positive", scale = "1";
    c.params.bind(c.cli, "alpha", &alpha, "index in (1,2)");
    c.params.bind(c.cli, "n", &n, "steps");
    c.params.bind(c.cli, "dt", &dt, "time step");
    c.params.bind(c.cli, "jump-sign", &sign, "positive|negative");
    c.params.bind(c.cli, "scale", &scale, "scale");
    c.run = [&](const fs::path& dir) {
      StableParams sp;
      sp.alpha = parse_rational(alpha);
      sp.jump_sign =
          sign == "negative" ? JumpSign::negative : JumpSign::positive;
      sp.scale = parse_rational(scale);
      StablePath path = sample_stable(RngStream(seed, 3), sp, std::stoull(n),
                                      parse_rational(dt));
      write_csv(path.path, (dir / "stable.csv").string());
      write_jump_csv(path.jumps, (dir / "stable_jumps.csv").string());
      return 0;
    };
  }
  // --- sle-driving ---
  {
    Cmd& c = cmds["sle-driving"];
    c.cli = app.add_subcommand("sle-driving", "chordal driving pair");
    static std::string kappa = "8/3", rho = "0", direction = "forward",
                       n = "100000", dt = "0.0001";
    c.params.bind(c.cli, "kappa", &kappa, "kappa in (0,4)");
    c.params.bind(c.cli, "rho", &rho, "force point weight");
    c.params.bind(c.cli, "direction", &direction, "forward|reverse");
    c.params.bind(c.cli, "n", &n, "steps");
    c.params.bind(c.cli, "dt", &dt, "time step");
    c.run = [&](const fs::path& dir) {
      DrivingPair pair = sample_chordal_driving(
          RngStream(seed, 4), parse_rational(kappa), parse_rational(rho),
          direction == "reverse" ? Direction::reverse : Direction::forward,
          std::stoull(n), parse_rational(dt));
      write_csv(pair.W, (dir / "driving_W.csv").string());
      write_csv(pair.V, (dir / "driving_V.csv").string());
      json j;
      j["kappa"] = pair.kappa;
      j["rho"] = pair.rho;
      j["gap_dimension_estimate"] = gap_dimension_estimate(pair);
      write_json(j, dir / "driving.json");
      return 0;
    };
  }
  // --- mate ---
  {
    Cmd& c = cmds["mate"];
    c.cli = app.add_subcommand("mate", "discrete mating of two excursions");
    static std::string n = "10000", kind = "gaussian";
    c.params.bind(c.cli, "n", &n, "time steps");
    c.params.bind(c.cli, "kind", &kind, "gaussian|pm1");
    c.run = [&](const fs::path& dir) {
      ExcursionPairGrid pair = make_excursion_pair(
          RngStream(seed, 5), std::stoull(n),
          kind == "pm1" ? ExcursionKind::pm_one : ExcursionKind::gaussian);
      MatedMap map = mate(pair);
      write_map(map, (dir / "mated_map.txt").string());
      ClassCensus census = class_census(pair);
      PushforwardReport push = pushforward_measure(map, pair);
      json j;
      j["n"] = map.n;
      j["vertices"] = map.vertex_count();
      j["edges"] = map.edge_count();
      j["faces"] = map.face_count();
      j["euler_characteristic"] = map.euler_characteristic();
      j["census"] = {{"type0", census.type0},
                     {"type1", census.type1},
                     {"type2", census.type2},
                     {"type3", census.type3},
                     {"max_interior_preimage", census.max_interior_preimage},
                     {"cross_side_minima", census.cross_side_minima}};
      j["pushforward_total"] = push.total_mass;
      j["faces_positive"] = push.every_face_positive;
      write_json(j, dir / "mate.json");
      return 0;
    };
  }
  // --- gff ---
  {
    Cmd& c = cmds["gff"];
    c.cli = app.add_subcommand("gff", "discrete Gaussian free field");
    static std::string n = "256", boundary = "dirichlet";
    c.params.bind(c.cli, "n", &n, "grid side (power of two)");
    c.params.bind(c.cli, "boundary", &boundary, "dirichlet|free");
    c.run = [&](const fs::path& dir) {
      FieldGrid f = sample_gff(RngStream(seed, 6), std::stoull(n),
                               boundary == "free"
                                   ? GffBoundary::free_mean_zero
                                   : GffBoundary::dirichlet);
      write_grid_csv(f.values, f.n, (dir / "gff.csv").string());
      write_pgm16(f.values, f.n, (dir / "gff.pgm").string());
      return 0;
    };
  }
  // --- measure ---
  {
    Cmd& c = cmds["measure"];
    c.cli = app.add_subcommand("measure", "regularized LQG area measure");
    static std::string n = "256", boundary = "dirichlet", gamma2 = "2",
                       eps = "3";
    c.params.bind(c.cli, "n", &n, "grid side");
    c.params.bind(c.cli, "boundary", &boundary, "dirichlet|free");
    c.params.bind(c.cli, "gamma2", &gamma2, "gamma squared (rational)");
    c.params.bind(c.cli, "eps", &eps, "circle-average radius, cells");
    c.run = [&](const fs::path& dir) {
      FieldGrid f = sample_gff(RngStream(seed, 7), std::stoull(n),
                               boundary == "free"
                                   ? GffBoundary::free_mean_zero
                                   : GffBoundary::dirichlet);
      double g = std::sqrt(parse_rational(gamma2));
      LqgMeasureGrid mu = lqg_area_measure(f, g, parse_rational(eps));
      write_grid_csv(mu.cell_mass, mu.n, (dir / "measure.csv").string());
      write_pgm16(mu.cell_mass, mu.n, (dir / "measure.pgm").string());
      json j;
      j["gamma"] = g;
      j["eps"] = mu.eps;
      j["total_mass"] = mu.total();
      write_json(j, dir / "measure.json");
      return 0;
    };
  }
  // --- surface ---
  {
    Cmd& c = cmds["surface"];
    c.cli = app.add_subcommand("surface", "quantum surface profile");
    static std::string kind = "wedge", gamma2 = "2", alpha = "",
                       weight = "2", horizon = "8", du = "0.01";
    c.params.bind(c.cli, "kind", &kind, "wedge|cone|thin|disk|sphere");
    c.params.bind(c.cli, "gamma2", &gamma2, "gamma squared");
    c.params.bind(c.cli, "alpha", &alpha, "log singularity (overrides weight)");
    c.params.bind(c.cli, "weight", &weight, "surface weight");
    c.params.bind(c.cli, "horizon", &horizon, "profile horizon");
    c.params.bind(c.cli, "du", &du, "profile step");
    c.run = [&](const fs::path& dir) {
      GammaContext ctx = GammaContext::from_gamma2(parse_rational(gamma2));
      if (kind == "thin") {
        auto beads =
            sample_thin_wedge(RngStream(seed, 8), parse_rational(weight),
                              ctx, 4, 0.05, parse_rational(du));
        for (std::size_t b = 0; b < beads.size(); ++b)
          write_csv(beads[b].h1,
                    (dir / ("bead" + std::to_string(b) + ".csv")).string());
        return 0;
      }
      if (kind == "disk" || kind == "sphere") {
        DiskSphereSpec spec;
        spec.kind = kind == "disk" ? SurfaceKind::disk : SurfaceKind::sphere;
        DiskSphereSample s = sample_disk_or_sphere(RngStream(seed, 8), spec,
                                                   ctx, parse_rational(du));
        write_csv(s.profile.h1, (dir / "profile.csv").string());
        json j;
        j["bessel_dimension"] = s.bessel_dimension;
        j["area_proxy"] = s.area_proxy;
        j["boundary_proxy"] = s.boundary_proxy;
        write_json(j, dir / "surface.json");
        return 0;
      }
      SurfaceKind sk =
          kind == "cone" ? SurfaceKind::cone : SurfaceKind::wedge;
      double a;
      if (!alpha.empty()) {
        a = parse_rational(alpha);
      } else {
        WedgeParams w =
            wedge_from(WedgeField::weight, parse_rational(weight), ctx);
        a = sk == SurfaceKind::cone
                ? cone_from(WedgeField::weight, parse_rational(weight), ctx)
                      .alpha
                : w.alpha;
      }
      SurfaceProfile prof =
          sample_surface_profile(RngStream(seed, 8), sk, a, ctx,
                                 parse_rational(horizon), parse_rational(du));
      write_csv(prof.h1, (dir / "profile.csv").string());
      return 0;
    };
  }
  // --- exponents ---
  {
    Cmd& c = cmds["exponents"];
    c.cli = app.add_subcommand("exponents", "closed-form exponent catalog");
    static std::string gamma2 = "8/3", n_max = "3";
    c.params.bind(c.cli, "gamma2", &gamma2, "gamma squared (rational)");
    c.params.bind(c.cli, "n-max", &n_max, "largest multiplicity");
    c.run = [&](const fs::path& dir) {
      GammaContext ctx = GammaContext::from_gamma2(parse_rational(gamma2));
      auto entries = exponent_catalog(ctx, std::stoi(n_max));
      std::ofstream csv(dir / "exponents.csv", std::ios::binary);
      csv << "name,locus,n,rho,Delta,Delta_dual,x,dim\n";
      json arr = json::array();
      char buf[256];
      for (const auto& e : entries) {
        std::snprintf(buf, sizeof buf,
                      "%s,%s,%d,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      e.name.c_str(),
                      e.locus == Locus::bulk ? "bulk" : "boundary", e.n,
                      e.rho, e.Delta, e.Delta_dual, e.x, e.dim);
        csv << buf;
        json je;
        je["name"] = e.name;
        je["locus"] = e.locus == Locus::bulk ? "bulk" : "boundary";
        je["n"] = e.n;
        je["rho"] = e.rho;
        je["Delta"] = e.Delta;
        je["Delta_dual"] = e.Delta_dual;
        je["x"] = e.x;
        je["dim"] = e.dim;
        arr.push_back(je);
      }
      write_json(arr, dir / "exponents.json");
      return 0;
    };
  }
  // --- fk ---
  {
    Cmd& c = cmds["fk"];
    c.cli = app.add_subcommand("fk", "FK cluster-weight dictionary");
    static std::string q = "1";
    c.params.bind(c.cli, "q", &q, "cluster weight in (0,4)");
    c.run = [&](const fs::path& dir) {
      FkParams f = fk_dictionary(parse_rational(q));
      json j;
      j["q"] = f.q;
      j["kappa_prime"] = f.kappa_prime;
      j["p"] = f.p;
      j["theta_kappa"] = f.theta_kappa;
      j["cov_rate"] = f.cov_rate;
      j["var_ratio"] = f.var_ratio;
      write_json(j, dir / "fk.json");
      std::cout << j.dump(2) << "\n";
      return 0;
    };
  }
  // --- levy ---
  {
    Cmd& c = cmds["levy"];
    c.cli = app.add_subcommand("levy", "forested line / Levy tree");
    static std::string kappa_prime = "6", horizon = "100", dt = "0.001";
    c.params.bind(c.cli, "kappa-prime", &kappa_prime, "kappa' in (4,8)");
    c.params.bind(c.cli, "horizon", &horizon, "local-time horizon");
    c.params.bind(c.cli, "dt", &dt, "time step");
    c.run = [&](const fs::path& dir) {
      ForestedLine fl =
          forested_line(RngStream(seed, 9), parse_rational(kappa_prime),
                        parse_rational(horizon), parse_rational(dt));
      std::ofstream csv(dir / "levy_tree.csv", std::ios::binary);
      csv << "node,time,boundary_length,parent,interval_end,area\n";
      char buf[256];
      for (std::size_t i = 0; i < fl.tree.nodes.size(); ++i) {
        const auto& nd = fl.tree.nodes[i];
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%ld,%.17g,%.17g\n",
                      i, nd.time, nd.boundary_length, nd.parent,
                      nd.interval_end, fl.disk_areas[i]);
        csv << buf;
      }
      json j;
      j["nodes"] = fl.tree.nodes.size();
      j["roots"] = fl.tree.root_count();
      j["nesting_ok"] = fl.tree.nesting_ok();
      write_json(j, dir / "levy.json");
      return 0;
    };
  }
  // --- dual-measure ---
  {
    Cmd& c = cmds["dual-measure"];
    c.cli = app.add_subcommand("dual-measure", "atomic dual measure");
    static std::string gamma_prime = "2.449489742783178", u_min = "0.001",
                       n = "64";
    c.params.bind(c.cli, "gamma-prime", &gamma_prime, "dual gamma > 2");
    c.params.bind(c.cli, "u-min", &u_min, "atom mass truncation");
    c.params.bind(c.cli, "n", &n, "carrier grid side");
    c.run = [&](const fs::path& dir) {
      double gp = parse_rational(gamma_prime);
      double g = 4.0 / gp;
      FieldGrid f = sample_gff(RngStream(seed, 10), std::stoull(n),
                               GffBoundary::dirichlet);
      LqgMeasureGrid mu = lqg_area_measure(f, g, 3.0);
      AtomicMeasure am =
          dual_atomic_measure(RngStream(seed, 11), mu.cell_mass, g, gp,
                              parse_rational(u_min));
      std::ofstream csv(dir / "dual_measure.csv", std::ios::binary);
      csv << "cell,mass\n";
      char buf[128];
      for (const auto& [mass, cell] : am.atoms) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g\n", cell, mass);
        csv << buf;
      }
      json j;
      j["theta"] = am.theta;
      j["u_min"] = am.u_min;
      j["atoms"] = am.atoms.size();
      j["carrier_total"] = mu.total();
      write_json(j, dir / "dual.json");
      return 0;
    };
  }
  // --- verify ---
  {
    Cmd& c = cmds["verify"];
    c.cli = app.add_subcommand("verify", "run a verification suite");
    static std::string suite = "algebra", seeds = "3";
    c.params.bind(c.cli, "suite", &suite, "suite name");
    c.params.bind(c.cli, "seeds", &seeds, "number of shipped seeds");
    c.cli->allow_extras();
    c.run = [&](const fs::path& dir) {
      auto names = suite_names();
      if (std::find(names.begin(), names.end(), suite) == names.end()) {
        std::cerr << "error: unknown suite '" << suite << "'\n";
        return 2;
      }
      std::vector<std::uint64_t> seed_set;
      auto count = static_cast<std::size_t>(std::stoul(seeds));
      for (std::size_t i = 0; i < count; ++i) seed_set.push_back(seed + i);
      SuiteReport rep =
          run_suite(suite, seed_set,
                    serial ? ExecMode::serial : ExecMode::openmp);
      json j;
      j["suite"] = rep.suite;
      j["pass"] = rep.pass();
      json checks = json::array();
      for (const auto& ck : rep.checks) {
        checks.push_back(check_to_json(ck));
        std::cout << (ck.pass ? "[PASS] " : "[FAIL] ") << ck.name
                  << "  statistic=" << ck.statistic
                  << " target=" << ck.target
                  << " tolerance=" << ck.tolerance << "\n";
      }
      j["checks"] = checks;
      write_json(j, dir / (suite + ".json"));
      return rep.pass() ? 0 : 1;
    };
  }
  // --- report ---
  {
    Cmd& c = cmds["report"];
    c.cli = app.add_subcommand("report", "consolidate suite reports");
    static std::string run_dir = ".";
    c.params.bind(c.cli, "dir", &run_dir, "run directory");
    c.run = [&](const fs::path& dir) {
      (void)dir;
      fs::path rd(run_dir);
      if (!fs::exists(rd / "manifest.cfg")) {
        std::cerr << "error: no manifest.cfg in " << rd << "\n";
        return 2;
      }
      json merged;
      merged["suites"] = json::array();
      bool all_pass = true;
      std::vector<std::string> failing;
      for (const auto& entry : fs::directory_iterator(rd)) {
        if (entry.path().extension() != ".json") continue;
        if (entry.path().filename() == "report.json") continue;
        std::ifstream in(entry.path());
        json j;
        in >> j;
        if (!j.contains("suite")) continue;
        merged["suites"].push_back(j);
        if (!j.value("pass", false)) {
          all_pass = false;
          for (const auto& ck : j["checks"])
            if (!ck.value("pass", false))
              failing.push_back(ck.value("name", "?"));
        }
      }
      merged["pass"] = all_pass;
      merged["failing_checks"] = failing;
      write_json(merged, rd / "report.json");
      std::cout << (all_pass ? "overall: pass" : "overall: fail") << "\n";
      for (const auto& f : failing) std::cout << "  failing: " << f << "\n";
      return all_pass ? 0 : 1;
    };
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  for (auto& [name, cmd] : cmds) {
    if (!cmd.cli->parsed()) continue;
    try {
      if (!config_path.empty())
        cmd.params.merge_config(config_path, reserved);
      fs::path dir(out_dir);
      fs::create_directories(dir);
      std::map<std::string, std::string> resolved;
      for (const auto& [k, opt] : cmd.params.options)
        resolved[k] = opt->count() > 0 ? opt->as<std::string>()
                                       : cmd.params.values.at(k);
      write_manifest(dir, name, seed, streams, serial, resolved);
      return cmd.run(dir);
    } catch (const std::invalid_argument& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    } catch (const std::domain_error& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }
  }
  return 2;
}
