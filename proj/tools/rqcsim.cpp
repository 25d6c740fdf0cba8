// Command-line front end. Exit codes: 0 success, 1 usage or input error,
// 2 numerical or resource error.
#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "rqcsim/amplitude_engine.h"
#include "rqcsim/analysis.h"
#include "rqcsim/builtin_plans.h"
#include "rqcsim/circuit_io.h"
#include "rqcsim/errors.h"
#include "rqcsim/generator.h"
#include "rqcsim/oracle.h"
#include "rqcsim/partition_cost.h"
#include "rqcsim/permute_bench.h"
#include "rqcsim/sampler.h"
#include "rqcsim/thread_pool.h"

using json = nlohmann::ordered_json;
using namespace rqcsim;

namespace {

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct SourceArgs {
  std::string circuit;
  std::string lattice;
  std::string depth = "1+8+1";
  std::uint64_t seed = 0;
  std::string gate = "cz";
};

struct RunArgs {
  std::string plan = "auto";
  std::string precision = "single";
  std::string memory_budget;
  std::size_t threads = ThreadPool::default_threads();
  std::string in;
  double fidelity = 1.0;
  std::string mode;
  std::optional<std::uint64_t> path_seed;
  std::string output;
};

void add_source(CLI::App* app, SourceArgs& s) {
  app->add_option("--circuit", s.circuit, "Circuit file");
  app->add_option("--lattice", s.lattice, "Lattice: grid:RxC, bristlecone-N, file:<path>");
  app->add_option("--depth", s.depth, "Depth 1+t+1")->capture_default_str();
  app->add_option("--seed", s.seed, "Seed for every random choice")->capture_default_str();
  app->add_option("--gate", s.gate, "Two-qubit gate for generation (cz, iswap)")->capture_default_str();
}

void add_run(CLI::App* app, RunArgs& r) {
  app->add_option("--plan", r.plan, "Plan file or 'auto'")->capture_default_str();
  app->add_option("--precision", r.precision, "single or double")
      ->check(CLI::IsMember({"single", "double"}))
      ->capture_default_str();
  app->add_option("--memory-budget", r.memory_budget, "Largest tensor allowed, bytes (K/M/G suffixes)");
  app->add_option("--threads", r.threads, "Worker threads (env RQCSIM_THREADS)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_option("--in", r.in, "Input bit-string (default all zeros)");
  app->add_option("--fidelity,-f", r.fidelity, "Target fidelity f")->capture_default_str();
  app->add_option("--mode", r.mode, "exact, paths or mixed (default: exact for f = 1, else paths)")
      ->check(CLI::IsMember({"exact", "paths", "mixed"}));
  app->add_option("--path-seed", r.path_seed, "Seed for path selection (default: --seed)");
  app->add_option("-o,--output", r.output, "Output file (default stdout)");
}

Circuit load_source(const SourceArgs& s) {
  const bool from_file = !s.circuit.empty();
  if (from_file && !s.lattice.empty()) throw UsageError("--circuit and --lattice are mutually exclusive");
  if (!from_file && s.lattice.empty()) throw UsageError("need --circuit or --lattice");
  if (from_file) return load_circuit(s.circuit);
  auto gate = gate_kind_from_name(s.gate);
  if (!gate || gate_arity(*gate) != 2) throw UsageError("--gate must be a two-qubit gate");
  return generate_rqc(Lattice::by_name(s.lattice), DepthSpec::parse(s.depth), s.seed, *gate);
}

double parse_bytes(const std::string& text) {
  if (text.empty()) return 0;
  std::size_t pos = 0;
  double v = std::stod(text, &pos);
  std::string suffix = text.substr(pos);
  if (suffix == "K" || suffix == "k")
    v *= 1024.0;
  else if (suffix == "M" || suffix == "m")
    v *= 1024.0 * 1024.0;
  else if (suffix == "G" || suffix == "g")
    v *= 1024.0 * 1024.0 * 1024.0;
  else if (!suffix.empty())
    throw UsageError("bad memory budget '" + text + "'");
  return v;
}

FidelitySpec fidelity_of(const RunArgs& r, std::uint64_t seed) {
  std::string mode = r.mode.empty() ? (r.fidelity == 1.0 ? "exact" : "paths") : r.mode;
  FidelitySpec spec;
  const std::uint64_t ps = r.path_seed.value_or(seed);
  if (mode == "exact") {
    if (r.fidelity != 1.0) throw UsageError("--mode exact requires f = 1");
    spec = FidelitySpec::exact();
  } else if (mode == "paths") {
    spec = FidelitySpec::path_fraction(r.fidelity, ps);
  } else {
    spec = FidelitySpec::mixed(r.fidelity, ps);
  }
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return spec;
}

Bits input_bits(const RunArgs& r, const Circuit& c) {
  if (r.in.empty()) return Bits(c.num_qubits(), 0);
  Bits b = bits_from_string(r.in);
  if (b.size() != c.num_qubits()) throw UsageError("--in must have one bit per qubit");
  return b;
}

json config_json(const std::string& command, const SourceArgs& s, const Circuit& c, const RunArgs* r) {
  json j;
  j["command"] = command;
  if (!s.circuit.empty()) j["circuit"] = s.circuit;
  j["lattice"] = c.lattice().name();
  j["depth"] = c.depth().str();
  j["seed"] = s.seed;
  if (c.seed) j["circuit_seed"] = *c.seed;
  if (r) {
    j["plan"] = r->plan;
    j["precision"] = r->precision;
    j["threads"] = r->threads;
    j["fidelity"] = r->fidelity;
    if (!r->mode.empty()) j["mode"] = r->mode;
    if (r->path_seed) j["path_seed"] = *r->path_seed;
    if (!r->memory_budget.empty()) j["memory_budget"] = r->memory_budget;
    if (!r->in.empty()) j["in"] = r->in;
  }
  return j;
}

struct Output {
  std::ofstream file;
  std::ostream* os = &std::cout;
  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    file.open(path);
    if (!file) throw UsageError("cannot write " + path);
    os = &file;
  }
};

struct EngineSetup {
  std::unique_ptr<ThreadPool> pool;
  std::unique_ptr<AmplitudeEngine> engine;
};

EngineSetup make_engine(const Circuit& c, const RunArgs& r, const Bits& in) {
  EngineSetup s;
  if (r.threads > 1) s.pool = std::make_unique<ThreadPool>(r.threads);
  EngineOptions eo;
  eo.double_precision = r.precision == "double";
  eo.exec.contract.pool = s.pool.get();
  const double budget = parse_bytes(r.memory_budget);
  eo.exec.memory_budget_bytes = static_cast<std::size_t>(budget);
  const std::size_t scalar = eo.double_precision ? sizeof(cdouble) : sizeof(cfloat);
  ContractionPlan plan = resolve_plan(r.plan, c, budget, scalar);
  s.engine = std::make_unique<AmplitudeEngine>(c, std::move(plan), in, eo);
  return s;
}

json amplitude_record(const Bits& in, const Bits& out, cdouble v, const PathStats& st, std::uint64_t seed) {
  json j;
  j["in"] = bits_to_string(in);
  j["out"] = bits_to_string(out);
  j["re"] = v.real();
  j["im"] = v.imag();
  j["f_target"] = st.f_target;
  j["f_achieved_estimate"] = st.f_achieved_estimate;
  j["paths"] = st.paths_used;
  j["seed"] = seed;
  return j;
}

std::vector<Bits> read_bitstrings(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot open " + path);
  std::vector<Bits> out;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty() || line[0] == '{' || line[0] == '#') continue;
    out.push_back(bits_from_string(line));
  }
  return out;
}

std::string format_cost(double v) {
  std::ostringstream os;
  if (std::abs(v - std::round(v)) < 1e-9)
    os << static_cast<long long>(std::llround(v));
  else
    os << std::fixed << std::setprecision(2) << v;
  return os.str();
}

std::vector<std::uint64_t> indexes_of(const std::vector<Bits>& samples, std::size_t n) {
  std::vector<std::uint64_t> idx;
  for (const auto& b : samples) {
    if (b.size() != n) throw UsageError("sample length does not match the circuit");
    idx.push_back(bits_to_index(b));
  }
  return idx;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tensor-network simulator for random quantum circuits"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  // gen
  SourceArgs gen_src;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "Generate a random circuit");
  add_source(gen, gen_src);
  gen->add_option("-o,--output", gen_out, "Circuit file (default stdout)");

  // amplitude
  SourceArgs amp_src;
  RunArgs amp_run;
  std::vector<std::string> amp_out;
  std::size_t amp_random = 0;
  std::string amp_ab;
  std::size_t amp_nc = 0;
  auto* amp = app.add_subcommand("amplitude", "Amplitudes <out|U|in>, single or batched");
  add_source(amp, amp_src);
  add_run(amp, amp_run);
  amp->add_option("--out", amp_out, "Output bit-string (repeatable)");
  amp->add_option("--random", amp_random, "Number of random output bit-strings");
  amp->add_option("--batch-ab", amp_ab, "Bits on the non-C qubits for a batch");
  amp->add_option("--nc", amp_nc, "Batch size N_C");

  // sample
  SourceArgs smp_src;
  RunArgs smp_run;
  SamplerConfig smp_cfg;
  auto* smp = app.add_subcommand("sample", "Frugal fast sampling");
  add_source(smp, smp_src);
  add_run(smp, smp_run);
  smp->add_option("--m", smp_cfg.m, "Rejection ceiling M")->capture_default_str();
  smp->add_option("--nc", smp_cfg.n_c, "Batch size N_C")->capture_default_str();
  smp->add_option("--samples", smp_cfg.target_samples, "Number of samples")->capture_default_str();
  smp->add_option("--max-batches", smp_cfg.max_batches, "Batch limit (0: 4x the expected need)");

  // verify
  SourceArgs ver_src;
  RunArgs ver_run;
  std::size_t ver_samples = 20;
  double ver_tol = -1;
  auto* ver = app.add_subcommand("verify", "Compare engine amplitudes against the state-vector oracle");
  add_source(ver, ver_src);
  add_run(ver, ver_run);
  ver->add_option("--samples", ver_samples, "Random output bit-strings to compare")->capture_default_str();
  ver->add_option("--tolerance", ver_tol, "Max relative error (default 1e-5 single, 1e-10 double)");

  // analyze
  auto* ana = app.add_subcommand("analyze", "Statistical checks");
  ana->require_subcommand(1);
  SourceArgs pt_src;
  std::string pt_input, pt_csv;
  std::size_t pt_bins = 50;
  double pt_xmax = 10;
  auto* pt = ana->add_subcommand("pt", "Porter-Thomas histogram and KS distance");
  add_source(pt, pt_src);
  pt->add_option("--input", pt_input, "Amplitude JSON-lines file (instead of a circuit)");
  pt->add_option("--bins", pt_bins, "Histogram bins")->capture_default_str();
  pt->add_option("--x-max", pt_xmax, "Histogram range of N p")->capture_default_str();
  pt->add_option("--csv", pt_csv, "Write x,empirical_density,reference_density");

  SourceArgs pe_src;
  RunArgs pe_run;
  std::size_t pe_draws = 1000, pe_nc = 32;
  std::string pe_csv;
  auto* pe = ana->add_subcommand("pearson", "Pearson coefficient against Hamming distance on C");
  add_source(pe, pe_src);
  add_run(pe, pe_run);
  pe->add_option("--ab-draws", pe_draws, "Random AB strings")->capture_default_str();
  pe->add_option("--nc", pe_nc, "C strings shared by every draw")->capture_default_str();
  pe->add_option("--csv", pe_csv, "Write hamming,mean_r,std_r");

  SourceArgs xe_src;
  std::string xe_samples;
  auto* xe = ana->add_subcommand("xeb", "Cross-entropy fidelity of sampled bit-strings");
  add_source(xe, xe_src);
  xe->add_option("--samples", xe_samples, "File with one bit-string per line")->required();

  // complexity
  std::string cx_lattice, cx_depth = "1+32+1", cx_scheme = "bi", cx_csv;
  std::uint64_t cx_seed = 0;
  auto* cx = app.add_subcommand("complexity", "Qubit complexity of partitioned simulation");
  cx->add_option("--lattice", cx_lattice, "Lattice")->required();
  cx->add_option("--depth", cx_depth, "Depth 1+t+1")->capture_default_str();
  cx->add_option("--scheme", cx_scheme, "bi, tri, quad or all")
      ->check(CLI::IsMember({"bi", "tri", "quad", "all"}))
      ->capture_default_str();
  cx->add_option("--seed", cx_seed, "Circuit seed")->capture_default_str();
  cx->add_option("--csv", cx_csv, "Write every candidate as scheme,params,cost_log2");

  // bench
  auto* bench = app.add_subcommand("bench", "Micro-benchmarks");
  bench->require_subcommand(1);
  PermuteBenchConfig pb_cfg;
  std::string pb_out;
  auto* pb = bench->add_subcommand("permute", "L/R moves against the naive permutation");
  pb->add_option("--rank", pb_cfg.rank, "Binary indexes")->capture_default_str();
  pb->add_option("--gamma", pb_cfg.gammas, "Move sizes")->capture_default_str();
  pb->add_option("--threads", pb_cfg.threads, "Thread counts")->capture_default_str();
  pb->add_option("--reps", pb_cfg.repetitions, "Repetitions")->capture_default_str();
  pb->add_option("--seed", pb_cfg.seed, "Seed")->capture_default_str();
  pb->add_option("-o,--output", pb_out, "CSV file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*gen) {
      Circuit c = load_source(gen_src);
      Output out(gen_out);
      *out.os << write_circuit(c);
      return 0;
    }

    if (*amp) {
      Circuit c = load_source(amp_src);
      const Bits in = input_bits(amp_run, c);
      const FidelitySpec spec = fidelity_of(amp_run, amp_src.seed);
      auto setup = make_engine(c, amp_run, in);
      const AmplitudeEngine& e = *setup.engine;
      Output out(amp_run.output);
      json header;
      header["config"] = config_json("amplitude", amp_src, c, &amp_run);
      header["config"]["total_paths"] = e.total_paths();
      *out.os << header.dump() << '\n';
      if (!amp_ab.empty()) {
        if (amp_nc == 0) throw UsageError("--batch-ab needs --nc");
        AmplitudeBatch b = e.amplitude_batch(bits_from_string(amp_ab), amp_nc, mix_seed(amp_src.seed, 11), spec);
        for (std::size_t i = 0; i < b.size(); ++i)
          *out.os << amplitude_record(in, e.join(b.s_ab, b.s_c[i]), b.amplitudes[i], b.stats, amp_src.seed).dump()
                  << '\n';
        return 0;
      }
      std::vector<Bits> outs;
      for (const auto& s : amp_out) outs.push_back(bits_from_string(s));
      Rng rng(mix_seed(amp_src.seed, 12));
      for (std::size_t k = 0; k < amp_random; ++k) outs.push_back(bits_from_index(
          c.num_qubits() >= 64 ? rng.next() : rng.below(std::uint64_t{1} << c.num_qubits()), c.num_qubits()));
      if (outs.empty()) throw UsageError("nothing to compute: give --out, --random or --batch-ab");
      for (const auto& r : e.amplitudes(outs, spec))
        *out.os << amplitude_record(in, r.out, r.value, r.stats, amp_src.seed).dump() << '\n';
      return 0;
    }

    if (*smp) {
      Circuit c = load_source(smp_src);
      const Bits in = input_bits(smp_run, c);
      smp_cfg.seed = smp_src.seed;
      smp_cfg.fidelity = fidelity_of(smp_run, smp_src.seed);
      auto setup = make_engine(c, smp_run, in);
      SampleRun run = sample_circuit(*setup.engine, smp_cfg);
      Output out(smp_run.output);
      for (const auto& s : run.samples) *out.os << bits_to_string(s) << '\n';
      json footer;
      footer["M"] = smp_cfg.m;
      footer["N_C"] = smp_cfg.n_c;
      footer["batches_used"] = run.batches_used;
      footer["acceptance_rate"] = run.acceptance_rate;
      footer["epsilon_estimate"] = run.epsilon_estimate;
      footer["samples"] = run.samples.size();
      footer["complete"] = run.complete;
      footer["config"] = config_json("sample", smp_src, c, &smp_run);
      *out.os << footer.dump() << '\n';
      return run.complete ? 0 : 2;
    }

    if (*ver) {
      Circuit c = load_source(ver_src);
      const Bits in = input_bits(ver_run, c);
      auto setup = make_engine(c, ver_run, in);
      OracleOptions oo;
      oo.pool = setup.pool.get();
      StateVector sv = evolve(c, in, oo);
      const double tol = ver_tol >= 0 ? ver_tol : (ver_run.precision == "double" ? 1e-10 : 1e-5);
      Rng rng(mix_seed(ver_src.seed, 13));
      std::vector<Bits> outs;
      for (std::size_t k = 0; k < ver_samples; ++k)
        outs.push_back(bits_from_index(rng.below(std::uint64_t{1} << c.num_qubits()), c.num_qubits()));
      const auto results = setup.engine->amplitudes(outs);
      const double floor = std::pow(2.0, -0.5 * static_cast<double>(c.num_qubits()));
      double max_abs = 0, max_rel = 0;
      for (const auto& r : results) {
        const cdouble x = sv.amplitudes()[bits_to_index(r.out)];
        const double d = std::abs(r.value - x);
        max_abs = std::max(max_abs, d);
        max_rel = std::max(max_rel, d / std::max(std::abs(x), floor));
      }
      json rep;
      rep["config"] = config_json("verify", ver_src, c, &ver_run);
      rep["samples"] = ver_samples;
      rep["max_abs_error"] = max_abs;
      rep["max_rel_error"] = max_rel;
      rep["tolerance"] = tol;
      rep["pass"] = max_rel <= tol;
      Output out(ver_run.output);
      *out.os << rep.dump(2) << '\n';
      return max_rel <= tol ? 0 : 2;
    }

    if (*pt) {
      std::vector<double> probs;
      double dim = 0;
      if (!pt_input.empty()) {
        std::ifstream f(pt_input);
        if (!f) throw UsageError("cannot open " + pt_input);
        std::string line;
        while (std::getline(f, line)) {
          if (line.empty()) continue;
          json j = json::parse(line);
          if (!j.contains("re")) continue;
          const double re = j["re"], im = j["im"];
          probs.push_back(re * re + im * im);
          dim = std::ldexp(1.0, static_cast<int>(j["out"].get<std::string>().size()));
        }
      } else {
        Circuit c = load_source(pt_src);
        probs = exact_distribution(c, Bits(c.num_qubits(), 0));
        dim = static_cast<double>(probs.size());
      }
      PTHistogram h = porter_thomas_check(probs, dim, pt_bins, pt_xmax);
      if (!pt_csv.empty()) {
        Output out(pt_csv);
        *out.os << pt_histogram_csv(h);
      }
      json rep;
      rep["samples"] = h.samples;
      rep["ks_statistic"] = h.ks_statistic;
      std::cout << rep.dump() << '\n';
      return 0;
    }

    if (*pe) {
      Circuit c = load_source(pe_src);
      const Bits in = input_bits(pe_run, c);
      auto setup = make_engine(c, pe_run, in);
      const AmplitudeEngine& e = *setup.engine;
      const FidelitySpec spec = fidelity_of(pe_run, pe_src.seed);
      const auto s_c = random_suffixes(e.c_positions().size(), pe_nc, mix_seed(pe_src.seed, 14));
      Rng rng(mix_seed(pe_src.seed, 15));
      const std::size_t ab_bits = e.ab_positions().size();
      std::vector<std::vector<double>> rows;
      for (std::size_t a = 0; a < pe_draws; ++a) {
        Bits ab = bits_from_index(rng.below(std::uint64_t{1} << ab_bits), ab_bits);
        rows.push_back(e.amplitude_batch(ab, s_c, spec).probabilities);
      }
      PearsonReport rep = pearson_vs_hamming(s_c, rows);
      Output out(pe_csv);
      *out.os << pearson_csv(rep);
      return 0;
    }

    if (*xe) {
      Circuit c = load_source(xe_src);
      const auto samples = read_bitstrings(xe_samples);
      const auto dist = exact_distribution(c, Bits(c.num_qubits(), 0));
      json rep;
      rep["samples"] = samples.size();
      rep["xeb_fidelity"] = xeb_fidelity(indexes_of(samples, c.num_qubits()), dist);
      std::vector<double> p;
      for (const auto& b : samples) p.push_back(dist[bits_to_index(b)]);
      rep["xeb_fidelity_porter_thomas"] = xeb_fidelity(p, static_cast<double>(dist.size()));
      std::cout << rep.dump() << '\n';
      return 0;
    }

    if (*cx) {
      Circuit c = generate_rqc(Lattice::by_name(cx_lattice), DepthSpec::parse(cx_depth), cx_seed);
      std::vector<std::string> schemes =
          cx_scheme == "all" ? std::vector<std::string>{"bi", "tri", "quad"} : std::vector<std::string>{cx_scheme};
      std::vector<PartitionResult> all;
      std::optional<PartitionResult> best;
      for (const auto& s : schemes) {
        auto fam = partition_family(c, s);
        for (const auto& r : fam)
          if (!best || r.cost < best->cost) best = r;
        all.insert(all.end(), fam.begin(), fam.end());
      }
      if (!best) throw UsageError("no partition of this lattice in the chosen scheme");
      if (!cx_csv.empty()) {
        Output out(cx_csv);
        *out.os << partition_csv(all);
      }
      std::cout << format_cost(best->cost) << '\n';
      std::cerr << "best: " << best->spec.scheme << " " << best->spec.params << " cost_log2=" << std::setprecision(8)
                << best->cost << '\n';
      return 0;
    }

    if (*pb) {
      auto rows = benchmark_permute(pb_cfg);
      Output out(pb_out);
      *out.os << permute_timings_csv(rows);
      return 0;
    }
  } catch (const ResourceError& e) {
    std::cerr << "resource error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
