// rbx: red-blue intersection preprocessing toolkit.
//
// Subcommands: count, report, index, batched, terrain-dist, gen, validate.
// Structured output serializes rationals as exact "p/q" strings; nothing in
// machine-readable output goes through floating point.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "rbindex/generator.hpp"
#include "rbindex/naive.hpp"
#include "rbindex/rb_search.hpp"
#include "rbindex/segment_io.hpp"
#include "rbindex/terrain_distance.hpp"
#include "rbindex/terrain_naive.hpp"

using json = nlohmann::ordered_json;
using namespace rbindex;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInvalid = 2;

struct Options {
  std::string format = "text";
  bool stats = false;
  bool strict = false;
};

bool structured(const Options& o) { return o.format == "structured"; }

SegmentSetPair load_or_die(const std::string& path, bool full_validation = true) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  LoadResult res = load_segments(in);
  ValidationReport rep = std::move(res.issues);
  if (rep.ok() && full_validation) rep = validate_input(res.pair);
  if (!rep.ok()) {
    for (const auto& v : rep.violations) std::cerr << v.code << ": " << v.message << "\n";
    std::exit(kExitInvalid);
  }
  return std::move(res.pair);
}

json stats_json(const SweepResult& sr, const SegmentSetPair& pair) {
  std::size_t n = pair.reds.size() + pair.blues.size();
  json j;
  j["events"] = sr.events.size();
  j["event_points"] = sr.stats.event_points;
  j["swaps"] = sr.stats.swaps;
  j["bundle_splits"] = sr.stats.bundle_splits;
  j["bundle_merges"] = sr.stats.bundle_merges;
  j["c_e"] = n ? format_rational(rat(static_cast<long>(sr.events.size()), static_cast<long>(n)))
               : "0";
  j["crossing_count"] = sr.crossing_count;
  return j;
}

void print_stats_text(const SweepResult& sr, const SegmentSetPair& pair, std::ostream& out) {
  std::size_t n = pair.reds.size() + pair.blues.size();
  out << "events " << sr.events.size() << "\n";
  out << "c_e " << (n ? format_rational(rat(static_cast<long>(sr.events.size()), static_cast<long>(n))) : "0")
      << "\n";
  out << "crossing_count " << sr.crossing_count << "\n";
}

int cmd_count(const std::string& path, const Options& opt) {
  auto pair = load_or_die(path);
  SweepResult sr = sweep(pair);
  if (structured(opt)) {
    json j;
    j["command"] = "count";
    j["crossings"] = sr.crossing_count;
    if (opt.stats) j["stats"] = stats_json(sr, pair);
    std::cout << j.dump() << "\n";
  } else {
    std::cout << sr.crossing_count << "\n";
    if (opt.stats) print_stats_text(sr, pair, std::cout);
  }
  return kExitOk;
}

int cmd_report(const std::string& path, const Options& opt) {
  auto pair = load_or_die(path);
  auto crossings = report_crossings(pair);
  if (structured(opt)) {
    json arr = json::array();
    for (const auto& c : crossings) {
      arr.push_back({{"red", c.red_id},
                     {"blue", c.blue_id},
                     {"x", format_rational(c.point.x)},
                     {"y", format_rational(c.point.y)}});
    }
    json j;
    j["command"] = "report";
    j["crossings"] = std::move(arr);
    std::cout << j.dump() << "\n";
  } else {
    for (const auto& c : crossings)
      std::cout << c.red_id << " " << c.blue_id << " " << format_rational(c.point.x) << " "
                << format_rational(c.point.y) << "\n";
  }
  return kExitOk;
}

int cmd_index(const std::string& path, bool dump, const Options& opt) {
  auto pair = load_or_die(path);
  RBIndex ix = preprocess(pair);
  if (dump) {
    dump_life_table(ix, std::cout);
    return kExitOk;
  }
  if (structured(opt)) {
    json j;
    j["command"] = "index";
    j["rows"] = ix.table.rows.size();
    j["columns"] = ix.table.columns.size();
    j["crossings"] = ix.table.crossing_count;
    j["outer_nodes"] = ix.outer_store->nodes_allocated();
    j["bundle_nodes"] = ix.blue_store->nodes_allocated();
    std::cout << j.dump() << "\n";
  } else {
    std::cout << "rows " << ix.table.rows.size() << " columns " << ix.table.columns.size()
              << " crossings " << ix.table.crossing_count << "\n";
  }
  return kExitOk;
}

int cmd_batched(const std::string& path, const std::optional<std::string>& target_x,
                const std::vector<int>& target_blue, const Options& opt) {
  auto pair = load_or_die(path);
  if (!target_x.has_value() == target_blue.empty()) {
    std::cerr << "batched requires exactly one of --target-x or --target-blue\n";
    return kExitError;
  }

  // Scripted oracles know the interesting crossing per edge up front and
  // answer by comparing positions along the edge.
  std::map<int, CrossingRef> targets;
  auto per_edge = naive_crossings(pair);
  if (target_x) {
    Rational tx = parse_rational(*target_x);
    for (const auto& [red_id, list] : per_edge) {
      const CrossingRef* best = nullptr;
      for (const auto& c : list)
        if (c.point.x <= tx) best = &c;  // list sorted by x: keep the last
      if (best) targets.emplace(red_id, *best);
    }
  } else {
    std::set<int> ids(target_blue.begin(), target_blue.end());
    for (const auto& [red_id, list] : per_edge)
      for (const auto& c : list)
        if (ids.count(c.blue_id)) {
          targets.emplace(red_id, c);
          break;
        }
  }
  Oracle oracle = [&](const CrossingRef& probe) {
    auto it = targets.find(probe.red_id);
    if (it == targets.end()) return OracleAnswer::GoLeft;
    if (it->second.point == probe.point) return OracleAnswer::Found;
    return it->second.point.x < probe.point.x ? OracleAnswer::GoLeft : OracleAnswer::GoRight;
  };

  RBIndex ix = preprocess(pair);
  BatchedStats st;
  auto found = batched_search(ix, oracle, opt.strict, &st);

  if (structured(opt)) {
    json arr = json::array();
    for (const auto& c : found)
      arr.push_back({{"red", c.red_id},
                     {"blue", c.blue_id},
                     {"x", format_rational(c.point.x)},
                     {"y", format_rational(c.point.y)}});
    json j;
    j["command"] = "batched";
    j["found"] = std::move(arr);
    if (opt.stats)
      j["stats"] = {{"oracle_calls", st.oracle_calls},
                    {"edges_with_crossings", st.edges_with_crossings}};
    std::cout << j.dump() << "\n";
  } else {
    for (const auto& c : found)
      std::cout << c.red_id << " " << c.blue_id << " " << format_rational(c.point.x) << " "
                << format_rational(c.point.y) << "\n";
    if (opt.stats)
      std::cout << "oracle_calls " << st.oracle_calls << "\nedges_with_crossings "
                << st.edges_with_crossings << "\n";
  }
  return kExitOk;
}

int cmd_terrain(const std::string& terrain_path, const std::string& planes_path, bool want_max,
                const Options& opt) {
  std::ifstream rin(terrain_path);
  if (!rin) throw std::runtime_error("cannot open " + terrain_path);
  std::ifstream bin(planes_path);
  if (!bin) throw std::runtime_error("cannot open " + planes_path);
  Terrain r = load_terrain(rin);
  ConvexTerrain b = load_planes(bin);

  ProjectedPair pp = build_projected_pair(r, b);
  if (!pp.issues.ok()) {
    for (const auto& v : pp.issues.violations) std::cerr << v.code << ": " << v.message << "\n";
    return kExitInvalid;
  }
  VDistResult res = want_max ? max_vertical_distance(r, b) : min_vertical_distance(r, b);
  if (structured(opt)) {
    json j;
    j["command"] = "terrain-dist";
    j["mode"] = want_max ? "max" : "min";
    j["value"] = format_rational(res.value);
    j["witness"] = {format_rational(res.witness_xy.x), format_rational(res.witness_xy.y)};
    j["case"] = vdist_case_name(res.kind);
    std::cout << j.dump() << "\n";
  } else {
    std::cout << format_rational(res.value) << " at (" << format_rational(res.witness_xy.x)
              << ", " << format_rational(res.witness_xy.y) << ") " << vdist_case_name(res.kind)
              << "\n";
  }
  return kExitOk;
}

int cmd_gen(std::uint64_t seed, int reds, int blues, const std::string& mode,
            const std::string& out_path) {
  if (const char* env = std::getenv("RBINDEX_SEED")) seed = std::strtoull(env, nullptr, 10);
  GenConfig cfg{seed, reds, blues, parse_gen_mode(mode)};
  SegmentSetPair pair = gen_random(cfg);
  if (out_path.empty()) {
    save_segments(std::cout, pair);
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open " + out_path);
    save_segments(out, pair);
  }
  return kExitOk;
}

int cmd_validate(const std::string& path, bool against_naive, const Options& opt) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  LoadResult res = load_segments(in);
  ValidationReport rep = std::move(res.issues);
  if (rep.ok()) rep = validate_input(res.pair);

  if (structured(opt)) {
    json arr = json::array();
    for (const auto& v : rep.violations) arr.push_back({{"code", v.code}, {"message", v.message}});
    json j;
    j["command"] = "validate";
    j["ok"] = rep.ok();
    j["violations"] = std::move(arr);
    std::cout << j.dump() << "\n";
  } else {
    for (const auto& v : rep.violations) std::cout << v.code << ": " << v.message << "\n";
  }
  if (!rep.ok()) return kExitInvalid;

  if (against_naive) {
    RBIndex ix = preprocess(res.pair);
    auto truth = naive_crossings(res.pair);
    unsigned long long total = 0;
    for (const auto& [red_id, list] : truth) {
      auto got = in_order(ix, red_id);
      total += list.size();
      if (got.size() != list.size()) {
        std::cerr << "naive mismatch on edge r" << red_id << "\n";
        return kExitError;
      }
      for (std::size_t i = 0; i < got.size(); ++i)
        if (!(got[i] == list[i])) {
          std::cerr << "naive mismatch on edge r" << red_id << "\n";
          return kExitError;
        }
    }
    std::cout << "naive agreement: " << res.pair.reds.size() << " edges, " << total
              << " crossings\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"red-blue intersection preprocessing toolkit"};
  app.require_subcommand(1);
  Options opt;
  app.add_option("--format", opt.format, "output format: text or structured")
      ->check(CLI::IsMember({"text", "structured"}));
  app.add_flag("--stats", opt.stats, "emit sweep/search statistics");
  app.add_flag("--strict", opt.strict, "strict batched-search termination");

  std::string in_path, out_path, mode = "general", target_x_s, terrain_path, planes_path;
  std::optional<std::string> target_x;
  std::vector<int> target_blue;
  bool dump = false, against_naive = false, want_max = false, want_min = false;
  std::uint64_t seed = 0;
  int reds = 16, blues = 16;

  auto* count = app.add_subcommand("count", "count red-blue crossings");
  count->add_option("file", in_path)->required();

  auto* report = app.add_subcommand("report", "list every crossing");
  report->add_option("file", in_path)->required();

  auto* index = app.add_subcommand("index", "build the search index");
  index->add_option("file", in_path)->required();
  index->add_flag("--dump", dump, "print the life table");

  auto* batched = app.add_subcommand("batched", "oracle-guided batched search");
  batched->add_option("file", in_path)->required();
  batched->add_option("--target-x", target_x_s,
                      "interesting = crossing with largest x <= this per edge");
  batched->add_option("--target-blue", target_blue,
                      "interesting = leftmost crossing with one of these blue ids");

  auto* tdist = app.add_subcommand("terrain-dist", "vertical distance between terrains");
  tdist->add_option("terrain", terrain_path)->required();
  tdist->add_option("planes", planes_path)->required();
  tdist->add_flag("--max", want_max);
  tdist->add_flag("--min", want_min);

  auto* gen = app.add_subcommand("gen", "generate a random valid instance");
  gen->add_option("--seed", seed);
  gen->add_option("--reds", reds);
  gen->add_option("--blues", blues);
  gen->add_option("--mode", mode, "general, grid-like or bundle-heavy");
  gen->add_option("--out", out_path);

  auto* validate = app.add_subcommand("validate", "check an instance file");
  validate->add_option("file", in_path)->required();
  validate->add_flag("--against-naive", against_naive,
                     "also compare the index against the pairwise reference");

  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    if (count->parsed()) return cmd_count(in_path, opt);
    if (report->parsed()) return cmd_report(in_path, opt);
    if (index->parsed()) return cmd_index(in_path, dump, opt);
    if (batched->parsed()) {
      if (!target_x_s.empty()) target_x = target_x_s;
      return cmd_batched(in_path, target_x, target_blue, opt);
    }
    if (tdist->parsed()) {
      if (want_max == want_min) {
        std::cerr << "terrain-dist needs exactly one of --max / --min\n";
        return kExitError;
      }
      return cmd_terrain(terrain_path, planes_path, want_max, opt);
    }
    if (gen->parsed()) return cmd_gen(seed, reds, blues, mode, out_path);
    if (validate->parsed()) return cmd_validate(in_path, against_naive, opt);
  } catch (const InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
