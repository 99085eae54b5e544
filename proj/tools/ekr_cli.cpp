// Command-line surface for the EKR verification toolkit.
//
// Exit codes: 0 success/verified, 1 counterexample found, 2 malformed
// input, 3 resource cap exceeded.

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "ekr/engine.hpp"
#include "ekr/enumerate.hpp"
#include "ekr/io.hpp"
#include "ekr/solver.hpp"
#include "ekr/sunflower.hpp"

using json = nlohmann::json;
using namespace ekr;

namespace {

json set_to_json(const ElementSet& s) {
  json arr = json::array();
  for_each_bit(s.bits, [&](int i) { arr.push_back(i + 1); });
  return arr;
}

json family_to_json(const SetFamily& f) {
  json arr = json::array();
  for (Mask m : f.members()) arr.push_back(set_to_json(ElementSet(m, f.ground())));
  return arr;
}

json report_to_json(const EkrReport& rep) {
  json j;
  j["i"] = rep.i;
  j["s"] = rep.s;
  j["star_center"] = rep.star_center + 1;
  j["is_ekr"] = rep.is_ekr;
  switch (rep.strictness) {
    case Strictness::Strict: j["is_strict"] = true; break;
    case Strictness::NonStrict: j["is_strict"] = false; break;
    case Strictness::Undecided: j["is_strict"] = "undecided"; break;
  }
  switch (rep.classification.kind) {
    case CaseKind::None: j["classification"] = "NONE"; break;
    case CaseKind::Case1:
      j["classification"] = "CASE1";
      j["K"] = set_to_json(rep.classification.K);
      break;
    case CaseKind::Case2:
      j["classification"] = "CASE2";
      j["K"] = set_to_json(rep.classification.K);
      j["M"] = set_to_json(rep.classification.M);
      j["k_in_H"] = rep.classification.k_in_h;
      break;
  }
  if (rep.nonstar_witness) j["nonstar_witness"] = family_to_json(*rep.nonstar_witness);
  return j;
}

int default_jobs() {
  if (const char* env = std::getenv("EKR_JOBS")) {
    int j = std::atoi(env);
    if (j >= 1) return j;
  }
  return 1;
}

struct VerifyRecord {
  std::string key;
  std::string id;  // key plus serialized members; unique without --iso
  json record;
  bool counterexample = false;
  bool undecided = false;
};

int run_verify(int n, bool iso, int jobs, const std::string& out_path) {
  std::vector<SetFamily> corpus = enumerate_downsets(n, 3, iso);

  std::map<std::string, json> resumed;
  if (!out_path.empty()) {
    std::ifstream in(out_path);
    std::string line;
    while (in && std::getline(in, line)) {
      if (line.empty()) continue;
      json j = json::parse(line, nullptr, false);
      if (!j.is_discarded() && j.contains("id")) resumed[j["id"]] = j;
    }
  }

  std::vector<VerifyRecord> records(corpus.size());
  std::atomic<std::size_t> next{0};
  std::ofstream append_out;
  std::mutex append_mu;
  if (!out_path.empty()) append_out.open(out_path, std::ios::app);

  auto worker = [&]() {
    for (;;) {
      std::size_t idx = next.fetch_add(1);
      if (idx >= corpus.size()) return;
      const SetFamily& h = corpus[idx];
      VerifyRecord& r = records[idx];
      r.key = canonical_form(h).bytes;
      std::string ser = serialize_family(h);
      for (char& c : ser)
        if (c == '\n') c = ';';
      r.id = r.key + "|" + ser;

      auto it = resumed.find(r.id);
      if (it != resumed.end()) {
        r.record = it->second;
        r.counterexample = !r.record.value("is_ekr", true);
        r.undecided = r.record.value("is_strict", json(true)).is_string();
        continue;
      }
      EkrReport rep = ekr_report(h);
      r.record = report_to_json(rep);
      r.record.erase("nonstar_witness");
      r.record["id"] = r.id;
      r.record["key"] = r.key;
      r.record["seed"] = 0;
      r.counterexample = !rep.is_ekr;
      r.undecided = rep.strictness == Strictness::Undecided;
      if (append_out.is_open()) {
        std::lock_guard<std::mutex> lk(append_mu);
        append_out << r.record.dump() << "\n" << std::flush;
      }
    }
  };

  std::vector<std::thread> pool;
  for (int t = 0; t < std::max(1, jobs); ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  std::stable_sort(records.begin(), records.end(),
                   [](const VerifyRecord& a, const VerifyRecord& b) { return a.id < b.id; });

  std::size_t counterexamples = 0, undecided = 0;
  for (const auto& r : records) {
    counterexamples += r.counterexample;
    undecided += r.undecided;
    std::cout << r.record.dump() << "\n";
  }
  json summary;
  summary["instances"] = records.size();
  summary["counterexamples"] = counterexamples;
  summary["undecided"] = undecided;
  std::cout << summary.dump() << "\n";

  if (!out_path.empty()) {
    std::ofstream rewrite(out_path, std::ios::trunc);
    for (const auto& r : records) rewrite << r.record.dump() << "\n";
  }
  return counterexamples == 0 ? 0 : 1;
}

int run_campaign(int n, int trials, std::uint64_t seed) {
  if (n < 6 || n > 12) throw PreconditionError("campaign-t4 supports 6 <= n <= 12");
  SplitMix64 seeder(seed);
  int done = 0, violations = 0;
  std::uint64_t attempts = 0;
  while (done < trials) {
    ++attempts;
    SamplerConfig cfg;
    cfg.n = n;
    cfg.seed = seeder.next();
    SetFamily h(1, {});
    if (attempts % 5 == 0) {
      cfg.p3 = 0.55 + 0.3 * (attempts % 3) / 3.0;
      cfg.extra2 = 0.1;
      h = sample_random_downset(cfg);
    } else {
      cfg.p3 = 0.75 + 0.25 * (attempts % 4) / 4.0;
      cfg.extra2 = 0.05;
      cfg.extra1 = 0.05;
      h = sample_star_seeded_downset(cfg, static_cast<int>(cfg.seed % cfg.n));
    }
    SolveResult sol = max_intersecting(h);
    if (!sol.optimality_proved) return 3;
    if (sol.size < 31) continue;
    ++done;
    try {
      NonStarResult ns = has_nonstar_maximum(h);
      Theorem4Result t4 = theorem4_pipeline(h, sol.witness);
      bool ok = !ns.answer && t4.star_center >= 0;
      if (!ok) ++violations;
    } catch (const ContradictionError& e) {
      ++violations;
      std::cerr << "counterexample: " << e.what() << "\n";
    }
  }
  json j;
  j["instances"] = done;
  j["attempts"] = attempts;
  j["counterexamples"] = violations;
  j["seed"] = seed;
  std::cout << j.dump() << "\n";
  return violations == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact EKR-property verification for small-set downsets"};
  app.require_subcommand(1);

  std::string file, file2, out_path;
  int k = 3, n = 4, jobs = default_jobs(), trials = 100, max_size = 3;
  bool iso = false;
  std::uint64_t seed = 0;

  auto* solve = app.add_subcommand("solve", "maximum intersecting subfamily");
  solve->add_option("file", file)->required();

  auto* check = app.add_subcommand("check", "full EKR report");
  check->add_option("file", file)->required();

  auto* sun = app.add_subcommand("sunflower", "find a k-petal sunflower");
  sun->add_option("file", file)->required();
  sun->add_option("--k", k)->required();

  auto* flo = app.add_subcommand("flower", "find a k-flower");
  flo->add_option("file", file)->required();
  flo->add_option("--k", k)->required();

  auto* rep = app.add_subcommand("repair", "exchange a maximum family for a star");
  rep->add_option("file", file)->required();
  rep->add_option("--intersecting", file2)->required();

  auto* enu = app.add_subcommand("enumerate", "stream all downsets of ([n] choose <=3)");
  enu->add_option("--n", n)->required();
  enu->add_option("--max-size", max_size);
  enu->add_flag("--iso", iso);

  auto* ver = app.add_subcommand("verify", "exhaustive EKR verification campaign");
  ver->add_option("--n", n)->required();
  ver->add_flag("--iso", iso);
  ver->add_option("--jobs", jobs);
  ver->add_option("--out", out_path);

  auto* camp = app.add_subcommand("campaign-t4", "randomized large-family campaign");
  camp->add_option("--n", n)->required();
  camp->add_option("--trials", trials)->required();
  camp->add_option("--seed", seed)->required();

  auto* cls = app.add_subcommand("classify", "non-strict structure classification");
  cls->add_option("file", file)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) {
      SolveResult res = max_intersecting(load_family(file));
      json j;
      j["i"] = res.size;
      j["witness"] = family_to_json(res.witness);
      j["nodes_explored"] = res.nodes_explored;
      j["optimality_proved"] = res.optimality_proved;
      std::cout << j.dump() << "\n";
      return res.optimality_proved ? 0 : 3;
    }
    if (check->parsed()) {
      std::cout << report_to_json(ekr_report(load_family(file))).dump() << "\n";
      return 0;
    }
    if (sun->parsed()) {
      auto cert = find_sunflower(load_family(file), k);
      if (!cert) {
        std::cout << "none\n";
        return 0;
      }
      json j;
      j["core"] = set_to_json(cert->core);
      j["k"] = cert->k;
      j["petals"] = json::array();
      for (const auto& p : cert->petals) j["petals"].push_back(set_to_json(p));
      std::cout << j.dump() << "\n";
      return 0;
    }
    if (flo->parsed()) {
      auto cert = find_k_flower(load_family(file), k);
      if (!cert) {
        std::cout << "none\n";
        return 0;
      }
      json j;
      j["core"] = set_to_json(cert->core);
      j["k"] = cert->k;
      j["tau_link"] = cert->tau_unbounded ? json("UNBOUNDED") : json(cert->tau_link);
      std::cout << j.dump() << "\n";
      return 0;
    }
    if (rep->parsed()) {
      SetFamily star = star_repair(load_family(file), load_family(file2));
      std::cout << serialize_family(star);
      return 0;
    }
    if (enu->parsed()) {
      bool first = true;
      enumerate_downsets(n, max_size, iso, [&](const SetFamily& f) {
        if (!first) std::cout << "\n";
        std::cout << serialize_family(f);
        first = false;
        return true;
      });
      return 0;
    }
    if (ver->parsed()) return run_verify(n, iso, jobs, out_path);
    if (camp->parsed()) return run_campaign(n, trials, seed);
    if (cls->parsed()) {
      Classification c = classify_nonstrict(load_family(file));
      json j;
      switch (c.kind) {
        case CaseKind::None: j["classification"] = "NONE"; break;
        case CaseKind::Case1:
          j["classification"] = "CASE1";
          j["K"] = set_to_json(c.K);
          break;
        case CaseKind::Case2:
          j["classification"] = "CASE2";
          j["K"] = set_to_json(c.K);
          j["M"] = set_to_json(c.M);
          j["k_in_H"] = c.k_in_h;
          break;
      }
      std::cout << j.dump() << "\n";
      return 0;
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const CapExceededError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const ResourceGuardError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const ContradictionError& e) {
    std::cerr << "counterexample: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
