#pragma once

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hyperlab/adiabatic.hpp"
#include "hyperlab/diophantine.hpp"
#include "hyperlab/physical_limits.hpp"
#include "hyperlab/real_enum.hpp"
#include "hyperlab/report.hpp"
#include "hyperlab/trial_and_error.hpp"
#include "hyperlab/turing.hpp"
#include "hyperlab/zeno.hpp"

namespace hyperlab::cli {

using report::Record;

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

namespace detail {

inline unsigned worker_threads() {
  if (const char* env = std::getenv("HYPERLAB_THREADS")) {
    try {
      const auto n = std::stoul(env);
      return n == 0 ? 1u : static_cast<unsigned>(n);
    } catch (const std::exception&) {
      return 1;
    }
  }
  return 1;
}

/// Exact value as "m*2^e" while it stays short; huge mantissas are omitted.
inline Record dyadic_field(const Dyadic& d) {
  if (d.mantissa().is_zero() || msb(abs(d.mantissa())) < 256) return d.to_string();
  return nullptr;
}

inline Record occupation(const fock::Occupation& n) { return Record(n); }

inline Record tape_record(const tm::TuringMachine& m, const tm::Configuration& c) {
  Record r;
  r["steps"] = c.steps;
  r["state"] = m.state_name(c.state);
  Record tapes = Record::array();
  Record heads = Record::array();
  for (std::size_t t = 0; t < c.tapes.size(); ++t) {
    Record tape;
    const auto& cells = c.tapes[t].cells();
    tape["origin"] = cells.empty() ? Record(nullptr) : Record(cells.begin()->first);
    tape["content"] = c.tapes[t].render(m.blank());
    tapes.push_back(tape);
    heads.push_back(c.heads[t]);
  }
  r["heads"] = heads;
  r["tapes"] = tapes;
  return r;
}

}  // namespace detail

struct GlobalOptions {
  std::uint64_t seed = 0;
  std::string format = "json";
  std::string output;
};

/// Parses `args` (without the program name), runs the command, writes the
/// report to `out` (or --output) and structured errors to `err`. Returns the
/// process exit status.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"hyperlab: hypercomputation simulation workbench", "hyperlab"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--seed", g.seed, "Seed for every random choice")->capture_default_str();
  app.add_option("--format", g.format, "Report format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  app.add_option("--output", g.output, "Write the report here instead of standard output");

  std::function<Record()> action;

  // ---- tm ----------------------------------------------------------------
  auto* tm_cmd = app.add_subcommand("tm", "Turing machine engine");
  tm_cmd->require_subcommand(1);
  auto* tm_run = tm_cmd->add_subcommand("run", "Run a machine document on an input");
  std::string tm_file, tm_input;
  std::uint64_t tm_fuel = 1'000'000;
  std::size_t tm_trace_cap = 10'000;
  bool tm_trace = false;
  tm_run->add_option("file", tm_file, "Machine JSON document")->required();
  tm_run->add_option("--input", tm_input, "Input symbols, one character each");
  tm_run->add_option("--fuel", tm_fuel, "Maximum number of steps")->check(CLI::PositiveNumber);
  tm_run->add_flag("--trace", tm_trace, "Include the configuration trace");
  tm_run->add_option("--trace-cap", tm_trace_cap, "Maximum trace length");
  tm_run->callback([&] {
    action = [&]() -> Record {
      const auto m = tm::load_machine_file(tm_file);
      tm::RunOptions opts{tm_fuel, tm_trace, tm_trace_cap};
      const auto r = tm::run(m, tm_input, opts);
      Record rep;
      rep["command"] = "tm run";
      rep["outcome"] = tm::to_string(r.kind);
      rep["fuel"] = tm_fuel;
      rep["final"] = detail::tape_record(m, r.final);
      if (tm_trace) {
        Record trace = Record::array();
        for (const auto& c : r.trace) trace.push_back(detail::tape_record(m, c));
        rep["trace"] = trace;
      }
      return rep;
    };
  });

  // ---- tae ---------------------------------------------------------------
  auto* tae_cmd = app.add_subcommand("tae", "Trial-and-error procedures");
  tae_cmd->require_subcommand(1);

  auto* goldbach = tae_cmd->add_subcommand("goldbach", "Goldbach answer stream");
  std::uint64_t gb_horizon = 100;
  goldbach->add_option("--horizon", gb_horizon, "Largest even number examined")->required();
  goldbach->callback([&] {
    action = [&]() -> Record {
      const auto run = tae::goldbach_stream(gb_horizon);
      Record rep;
      rep["command"] = "tae goldbach";
      rep["horizon"] = gb_horizon;
      Record answers = Record::array();
      for (const auto& a : run.stream.answers())
        answers.push_back({{"step", a.step}, {"verdict", a.yes ? "yes" : "no"}});
      rep["answers"] = answers;
      rep["final_verdict"] = run.stream.final_verdict() ? "yes" : "no";
      rep["mind_changes"] = run.stream.mind_changes();
      rep["examined_up_to"] = run.examined_up_to;
      rep["counterexample"] = run.counterexample ? Record(*run.counterexample) : Record(nullptr);
      rep["caveat"] = "a settled stream is never known to be final";
      return rep;
    };
  });

  auto* ashby = tae_cmd->add_subcommand("ashby", "Expected time to all-success for N wheels");
  tae::WheelExperiment wheel;
  int strategy = 1;
  bool simulate = false;
  std::uint64_t trials = 100'000;
  ashby->add_option("--wheels", wheel.wheels, "Number of wheels N")->required()->check(CLI::PositiveNumber);
  ashby->add_option("--p", wheel.p, "Success probability per spin")->required();
  ashby->add_option("--strategy", strategy, "Compounding strategy")->required()->check(CLI::IsMember({1, 2, 3}));
  ashby->add_flag("--simulate", simulate, "Also run a seeded Monte Carlo");
  ashby->add_option("--trials", trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
  ashby->callback([&] {
    action = [&]() -> Record {
      wheel.strategy = static_cast<tae::Strategy>(strategy);
      wheel.seed = g.seed;
      const auto ex = tae::ashby_expected(wheel);
      Record rec;
      rec["wheels"] = wheel.wheels;
      rec["p"] = wheel.p;
      rec["strategy"] = strategy;
      rec["expected_seconds"] = ex.expected;
      rec["log2_expected_seconds"] = ex.log2_expected;
      rec["simulated_mean"] = nullptr;
      rec["standard_error"] = nullptr;
      rec["trials"] = nullptr;
      rec["seed"] = nullptr;
      if (simulate) {
        const auto sim = tae::ashby_simulate(wheel, trials, detail::worker_threads());
        rec["simulated_mean"] = sim.mean;
        rec["standard_error"] = sim.standard_error;
        rec["trials"] = sim.trials;
        rec["seed"] = g.seed;
      }
      Record rep;
      rep["command"] = "tae ashby";
      rep["quantity"] = strategy == 1   ? "p^-N"
                        : strategy == 2 ? "N/p"
                                        : "sum_{t>=0} 1-(1-(1-p)^t)^N";
      rep["records"] = Record::array({rec});
      rep["literature_figures"] = {{"N", 1000},
                                   {"p", 0.5},
                                   {"case1_log2_seconds", 1000},
                                   {"case2_seconds", 500},
                                   {"case3", "slightly over 0.5 s"},
                                   {"asserted", false}};
      return rep;
    };
  });

  auto* bogo = tae_cmd->add_subcommand("bogosort", "Random-permutation sorting");
  std::size_t bogo_len = 5;
  bool bogo_memo = false;
  std::uint64_t bogo_max = 10'000'000;
  bogo->add_option("--len", bogo_len, "Sequence length; input is len..1")->required();
  bogo->add_flag("--memo", bogo_memo, "Never revisit an arrangement");
  bogo->add_option("--max-tries", bogo_max, "Give-up bound for the plain variant");
  bogo->callback([&] {
    action = [&]() -> Record {
      std::vector<std::int64_t> seq(bogo_len);
      for (std::size_t i = 0; i < bogo_len; ++i) seq[i] = static_cast<std::int64_t>(bogo_len - i);
      const auto r = tae::bogosort(seq, bogo_memo, g.seed, bogo_max);
      Record rep;
      rep["command"] = "tae bogosort";
      rep["len"] = bogo_len;
      rep["memoized"] = bogo_memo;
      rep["seed"] = g.seed;
      rep["input"] = seq;
      rep["result"] = r.sequence;
      rep["tries"] = r.tries;
      rep["gave_up"] = r.gave_up;
      return rep;
    };
  });

  // ---- zeno --------------------------------------------------------------
  auto* zeno_cmd = app.add_subcommand("zeno", "Accelerated machine time accounting");
  zeno_cmd->require_subcommand(1);
  double z_base = 1.0;
  unsigned z_ratio_log2 = 1;
  auto schedule = [&] { return zeno::ZenoSchedule{Dyadic::from_double(z_base), z_ratio_log2}; };
  auto add_schedule = [&](CLI::App* c) {
    c->add_option("--base", z_base, "Duration of the first step")->check(CLI::PositiveNumber);
    c->add_option("--ratio-log2", z_ratio_log2, "Each step lasts 2^-k of the previous")->check(CLI::Range(1u, 64u));
  };

  auto* ztime = zeno_cmd->add_subcommand("time", "Time after steps 0..n");
  std::uint64_t z_n = 0;
  ztime->add_option("--n", z_n, "Last step index")->required();
  add_schedule(ztime);
  ztime->callback([&] {
    action = [&]() -> Record {
      const auto s = schedule();
      const auto t = zeno::zeno_time(z_n, s);
      Record rep;
      rep["command"] = "zeno time";
      rep["quantity"] = "t(n) = sum_{i=0..n} base*ratio^i";
      rep["n"] = z_n;
      rep["t"] = t.to_double();
      rep["t_exact"] = detail::dyadic_field(t);
      rep["limit"] = s.limit();
      return rep;
    };
  });

  auto* zbudget = zeno_cmd->add_subcommand("budget", "Steps completed within a time budget");
  double z_seconds = 1.0;
  zbudget->add_option("--seconds", z_seconds, "Time budget")->required();
  add_schedule(zbudget);
  zbudget->callback([&] {
    action = [&]() -> Record {
      const auto s = schedule();
      const auto b = zeno::steps_within_budget(Dyadic::from_double(z_seconds), s);
      Record rep;
      rep["command"] = "zeno budget";
      rep["quantity"] = "largest n with t(n) <= budget";
      rep["seconds"] = z_seconds;
      rep["limit"] = s.limit();
      switch (b.kind) {
        case zeno::StepBudget::Kind::unbounded: rep["steps"] = "Unbounded"; break;
        case zeno::StepBudget::Kind::below_first_step: rep["steps"] = nullptr; break;
        case zeno::StepBudget::Kind::finite: rep["steps"] = b.steps; break;
      }
      return rep;
    };
  });

  auto* zgain = zeno_cmd->add_subcommand("gain", "Extra realizable steps from a longer first step");
  double z_short = 1.0, z_long = 64.0, z_floor = 0.0;
  zgain->add_option("--short", z_short, "Shorter first-step duration")->required();
  zgain->add_option("--long", z_long, "Longer first-step duration")->required();
  zgain->add_option("--floor", z_floor, "Shortest physically realizable step (default 1/f_max at one symbol)");
  add_schedule(zgain);
  zgain->callback([&] {
    action = [&]() -> Record {
      const double floor = z_floor > 0.0 ? z_floor : 1.0 / limits::max_frequency_from_alphabet(1.0);
      const auto fl = Dyadic::from_double(floor);
      const auto a = zeno::realizable_steps(Dyadic::from_double(z_short), fl, z_ratio_log2);
      const auto b = zeno::realizable_steps(Dyadic::from_double(z_long), fl, z_ratio_log2);
      Record rep;
      rep["command"] = "zeno gain";
      rep["quantity"] = "#{n >= 1 : first*ratio^(n-1) >= floor}";
      rep["floor_seconds"] = floor;
      rep["short"] = {{"first_step", z_short}, {"steps", a}};
      rep["long"] = {{"first_step", z_long}, {"steps", b}};
      rep["difference"] = static_cast<std::int64_t>(b) - static_cast<std::int64_t>(a);
      return rep;
    };
  });

  auto* zlamp = zeno_cmd->add_subcommand("lamp", "Lamp toggled at every step boundary");
  double z_t = 0.0;
  bool z_off_start = false;
  zlamp->add_option("--t", z_t, "Time")->required();
  zlamp->add_flag("--off-at-start", z_off_start, "Lamp is Off before the first toggle");
  add_schedule(zlamp);
  zlamp->callback([&] {
    action = [&]() -> Record {
      const auto r = zeno::thomson_lamp(Dyadic::from_double(z_t), schedule(), {!z_off_start});
      Record rep;
      rep["command"] = "zeno lamp";
      rep["t"] = z_t;
      rep["state"] = zeno::to_string(r.state);
      rep["toggles"] = r.state == zeno::LampState::undefined ? Record(nullptr) : Record(r.toggles);
      rep["defined_on"] = {0.0, schedule().limit()};
      return rep;
    };
  });

  auto* zhalt = zeno_cmd->add_subcommand("halting", "Halting flag of an accelerated simulation");
  std::string zh_file, zh_input;
  std::uint64_t zh_fuel = 1'000'000;
  zhalt->add_option("file", zh_file, "Machine JSON document")->required();
  zhalt->add_option("--input", zh_input, "Input symbols");
  zhalt->add_option("--fuel", zh_fuel, "Fuel bound")->check(CLI::PositiveNumber);
  zhalt->callback([&] {
    action = [&]() -> Record {
      const auto m = tm::load_machine_file(zh_file);
      const auto r = zeno::atm_halting_flag(m, zh_input, zh_fuel);
      Record rep;
      rep["command"] = "zeno halting";
      rep["flag"] = r.flag;
      rep["outcome"] = tm::to_string(r.outcome);
      rep["steps"] = r.steps;
      rep["elapsed"] = r.elapsed.to_double();
      rep["elapsed_exact"] = detail::dyadic_field(r.elapsed);
      rep["fuel"] = zh_fuel;
      rep["surrogate"] = "fuel-bounded: flag 0 means no halt within fuel";
      return rep;
    };
  });

  auto* zsl = zeno_cmd->add_subcommand("superluminal", "First step whose head speed exceeds c");
  double zs_speed = 1.0, zs_pitch = 1.0;
  zsl->add_option("--speed", zs_speed, "Head speed during step 1 (m/s)");
  zsl->add_option("--pitch", zs_pitch, "Cell pitch (m)");
  zsl->callback([&] {
    action = [&]() -> Record {
      Record rep;
      rep["command"] = "zeno superluminal";
      rep["quantity"] = "least n with v1*2^(n-1) > c";
      rep["speed_step1"] = zs_speed;
      rep["pitch"] = zs_pitch;
      rep["first_superluminal_step"] = zeno::first_superluminal_step(zs_speed, zs_pitch);
      rep["literature_step"] = zeno::kQuotedSuperluminalStep;
      return rep;
    };
  });

  // ---- limits ------------------------------------------------------------
  auto* lim = app.add_subcommand("limits", "Physical bounds on mechanical computation");
  double l_z = 1.0;
  std::optional<double> l_power, l_dt;
  lim->add_option("--symbols", l_z, "Alphabet size z")->required();
  lim->add_option("--power", l_power, "Power budget (W)");
  lim->add_option("--dt", l_dt, "Step duration (s)");
  lim->callback([&] {
    action = [&]() -> Record {
      const auto& k = limits::kSI;
      const double f = limits::max_frequency_from_alphabet(l_z);
      const double ceiling = limits::frequency_symbol_ceiling();
      const double quoted = 0.5 * limits::kQuotedInverseLightCrossing;
      Record rep;
      rep["command"] = "limits";
      rep["constants"] = {{"c_m_per_s", k.c}, {"h_J_s", k.h}, {"a_m", k.a}};
      rep["symbols"] = l_z;
      rep["max_frequency_steps_per_s"] = f;
      rep["min_symbol_distance_m"] = limits::min_symbol_distance(l_z);
      rep["min_symbol_volume_m3"] = limits::min_symbol_volume(l_z);
      rep["volume_reading"] = "V >= (4/3) pi a^3 z; trailing m^3 read as a unit";
      rep["frequency_symbol_ceiling"] = ceiling;
      rep["quoted_ceiling"] = quoted;
      rep["ceiling_relative_gap"] = std::abs(ceiling - quoted) / quoted;
      rep["bound_product_holds"] = limits::bound_product_holds(f, l_z);
      if (l_power) rep["max_frequency_from_power_steps_per_s"] = limits::max_frequency_from_power(*l_power);
      if (l_dt) rep["min_step_energy_J"] = limits::min_step_energy(*l_dt);
      return rep;
    };
  });

  // ---- enum --------------------------------------------------------------
  auto* en = app.add_subcommand("enum", "Enumeration of finite-precision reals");
  en->require_subcommand(1);
  auto* dec = en->add_subcommand("decode", "Pair for an index");
  auto* enc = en->add_subcommand("encode", "Index for a pair (a, b)");
  auto* lst = en->add_subcommand("list", "First N enumerated values");
  std::string e_index = "0", e_a = "0", e_b = "0";
  std::uint64_t e_count = 10;
  dec->add_option("--index", e_index, "Index")->required();
  enc->add_option("--a", e_a, "Digit payload")->required();
  enc->add_option("--b", e_b, "Decimal shift")->required();
  lst->add_option("--count", e_count, "How many")->required();
  auto natural = [](const std::string& s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
      fail(ErrorKind::domain, "'" + s + "' is not a natural number");
    return reals::Natural(s);
  };
  auto value_text = [](const reals::Rational& v) {
    return numerator(v).str() + (denominator(v) == 1 ? "" : "/" + denominator(v).str());
  };
  dec->callback([&] {
    action = [&]() -> Record {
      const auto [x, y] = reals::pair_decode(natural(e_index));
      Record rep;
      rep["command"] = "enum decode";
      rep["index"] = e_index;
      rep["a"] = x.str();
      rep["b"] = y.str();
      rep["value"] = value_text(reals::real_value(x, y));
      return rep;
    };
  });
  enc->callback([&] {
    action = [&]() -> Record {
      const auto a = natural(e_a), b = natural(e_b);
      Record rep;
      rep["command"] = "enum encode";
      rep["a"] = e_a;
      rep["b"] = e_b;
      rep["index"] = reals::pair_index(a, b).str();
      rep["value"] = value_text(reals::real_value(a, b));
      return rep;
    };
  });
  lst->callback([&] {
    action = [&]() -> Record {
      Record records = Record::array();
      for (const auto& e : reals::enumerate(e_count)) {
        Record r;
        r["index"] = e.index.str();
        r["a"] = e.pair.a.str();
        r["b"] = e.pair.b.str();
        r["value"] = value_text(e.value);
        r["status"] = e.status == reals::PairStatus::canonical   ? "canonical"
                      : e.status == reals::PairStatus::duplicate ? "duplicate"
                                                                 : "unindexable";
        r["canonical_index"] = e.canonical_index ? Record(e.canonical_index->str()) : Record(nullptr);
        records.push_back(r);
      }
      Record rep;
      rep["command"] = "enum list";
      rep["count"] = e_count;
      rep["records"] = records;
      return rep;
    };
  });

  // ---- aqc ---------------------------------------------------------------
  auto* aqc_cmd = app.add_subcommand("aqc", "Adiabatic decision of small Diophantine equations");
  aqc_cmd->require_subcommand(1);
  auto* solve = aqc_cmd->add_subcommand("solve", "Evolve, measure and decide");
  std::string a_file;
  aqc::DecideOptions a_opts;
  bool oracle_only = false;
  solve->add_option("file", a_file, "Polynomial JSON document")->required();
  solve->add_option("--cutoff", a_opts.cutoff, "Occupation cutoff per mode")->required()->check(CLI::PositiveNumber);
  solve->add_option("--time", a_opts.total_time, "Total evolution time T");
  solve->add_option("--dt", a_opts.dt, "Integrator step (0: automatic)");
  solve->add_option("--shots", a_opts.shots, "Measurement shots")->check(CLI::PositiveNumber);
  solve->add_flag("--oracle-only", oracle_only, "Only run the exhaustive lattice scan");
  solve->callback([&] {
    action = [&]() -> Record {
      const auto d = dioph::parse_polynomial_file(a_file);
      Record rep;
      rep["command"] = "aqc solve";
      rep["polynomial"] = d.to_string();
      rep["cutoff"] = a_opts.cutoff;
      if (oracle_only) {
        const auto o = dioph::exact_ground_oracle(d, a_opts.cutoff);
        Record mins = Record::array();
        for (const auto& m : o.minimizers) mins.push_back(detail::occupation(m));
        rep["ground_energy"] = o.ground_energy;
        rep["ground_tuples"] = mins;
        rep["lattice_size"] = o.lattice_size;
        rep["solvable_up_to_cutoff"] = o.ground_energy == 0;
        return rep;
      }
      a_opts.seed = g.seed;
      const auto r = aqc::decide(d, a_opts);
      rep["verdict"] = aqc::to_string(r.verdict);
      rep["witness"] = r.witness ? detail::occupation(*r.witness) : Record(nullptr);
      rep["most_frequent"] = detail::occupation(r.most_frequent);
      rep["ground_energy"] = r.ground_energy;
      Record mins = Record::array();
      for (const auto& m : r.ground_tuples) mins.push_back(detail::occupation(m));
      rep["ground_tuples"] = mins;
      rep["success_probability_estimate"] = r.success_probability_estimate;
      rep["ground_overlap"] = r.ground_overlap;
      rep["norm_drift"] = r.norm_drift;
      rep["time"] = r.total_time;
      rep["dt"] = r.dt;
      rep["steps"] = r.steps;
      rep["shots"] = r.shots;
      rep["seed"] = g.seed;
      Record samples = Record::array();
      for (const auto& [tuple, count] : r.samples) samples.push_back({{"tuple", tuple}, {"count", count}});
      rep["samples"] = samples;
      rep["caveat"] =
          "negative verdicts hold only for occupations up to the cutoff; the fixed (time, shots) "
          "schedule does not certify that the evolution stayed adiabatic";
      return rep;
    };
  });

  // ------------------------------------------------------------------------
  auto emit_error = [&](std::string_view kind, const std::string& message) {
    Record e;
    e["error"] = kind;
    e["message"] = message;
    err << report::to_json_text(e);
  };

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    emit_error("usage_error", e.what());
    return kExitUsage;
  }

  try {
    const Record rep = action();
    const auto text = report::render(rep, g.format == "csv" ? report::Format::csv : report::Format::json);
    if (g.output.empty()) {
      out << text;
    } else {
      std::ofstream file(g.output, std::ios::binary | std::ios::trunc);
      if (!file || !(file << text) || !file.flush())
        fail(ErrorKind::io, "cannot write report to " + g.output);
    }
    return kExitOk;
  } catch (const Error& e) {
    emit_error(to_string(e.kind()), e.what());
    return kExitDomain;
  } catch (const std::exception& e) {
    emit_error("error", e.what());
    return kExitDomain;
  }
}

}  // namespace hyperlab::cli
