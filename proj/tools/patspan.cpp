#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "patspan/fincat.hpp"
#include "patspan/gamma.hpp"
#include "patspan/monad.hpp"
#include "patspan/omega.hpp"
#include "patspan/saturation.hpp"
#include "patspan/segal.hpp"
#include "patspan/simplex.hpp"
#include "patspan/theta.hpp"

using namespace patspan;

namespace {

// exit codes: 0 verified/success, 1 verification failed, 2 input error,
// 3 resource cap
constexpr int kOk = 0;
constexpr int kVerifyFailed = 1;
constexpr int kInputError = 2;
constexpr int kResource = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::shared_ptr<const Pattern> make_pattern(const std::string& id, int bound) {
  if (bound < 0) return pattern_by_id(id);
  if (id == "delta-natural") return std::make_shared<DeltaPattern>(true, bound);
  if (id == "delta-flat") return std::make_shared<DeltaPattern>(false, bound);
  if (id == "gamma-natural") return std::make_shared<GammaPattern>(true, bound);
  if (id == "gamma-flat") return std::make_shared<GammaPattern>(false, bound);
  if (id == "theta-2") return std::make_shared<ThetaPattern>(2, bound);
  if (id == "theta-3") return std::make_shared<ThetaPattern>(3, bound);
  if (id == "omega-planar") return std::make_shared<OmegaPattern>(bound, 3);
  return pattern_by_id(id);
}

std::string slice_to_text(const Slice& s) {
  std::ostringstream os;
  os << "objects (" << s.cat.objects.size() << "):\n";
  for (const auto& o : s.cat.objects) os << "  " << o << "\n";
  os << "morphisms (" << s.cat.mors.size() << "):\n";
  for (const auto& m : s.cat.mors)
    os << "  " << m.id << ": " << s.cat.objects[m.src] << " -> " << s.cat.objects[m.dst] << "\n";
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"computations with algebraic patterns, Segal objects and pattern-shaped spans"};
  app.require_subcommand(1);

  std::string pattern_id = "delta-natural";
  std::string object_text, source_text, target_text, morphism_text, tree_text;
  std::string json_file, graph_file, format = "text", cls = "all";
  int bound = -1;
  long long candidate_cap = 2000000;
  int path_cap = 16;

  auto add_pattern_opt = [&](CLI::App* c) {
    c->add_option("--pattern", pattern_id, "pattern id (delta-natural, delta-flat, gamma-flat, "
                                           "gamma-natural, theta-2, theta-3, omega-planar, "
                                           "products like gamma-flat*delta-natural)");
    c->add_option("--bound", bound, "size bound override for the pattern instance");
  };

  auto* pat = app.add_subcommand("pattern", "pattern-level operations");
  auto* pat_fact = pat->add_subcommand("factorize", "inert-active factorization of a morphism");
  add_pattern_opt(pat_fact);
  pat_fact->add_option("--morphism", morphism_text, "morphism key")->required();
  pat_fact->add_option("--source", source_text, "source object")->required();
  pat_fact->add_option("--target", target_text, "target object")->required();
  auto* pat_slice = pat->add_subcommand("slice", "elementary slice at an object");
  add_pattern_opt(pat_slice);
  pat_slice->add_option("--object", object_text)->required();
  pat_slice->add_option("--format", format, "json, dot or text");
  auto* pat_hom = pat->add_subcommand("hom", "enumerate morphisms between two objects");
  add_pattern_opt(pat_hom);
  pat_hom->add_option("--source", source_text)->required();
  pat_hom->add_option("--target", target_text)->required();
  pat_hom->add_option("--class", cls, "all, inert or active");

  auto* theta = app.add_subcommand("theta", "level-tree operations");
  auto* th_sect = theta->add_subcommand("sectors", "sector globular set of a tree");
  th_sect->add_option("--tree", tree_text)->required();
  th_sect->add_option("--format", format, "json or text");
  auto* th_dec = theta->add_subcommand("decompose", "globular sum decomposition");
  th_dec->add_option("--tree", tree_text)->required();

  auto* sat = app.add_subcommand("saturation", "global saturation checks");
  auto* sat_check = sat->add_subcommand("check", "check one object");
  add_pattern_opt(sat_check);
  sat_check->add_option("--object", object_text)->required();
  sat_check->add_option("--path-cap", path_cap);
  auto* sat_sweep = sat->add_subcommand("sweep", "check every object within bound");
  add_pattern_opt(sat_sweep);
  sat_sweep->add_option("--path-cap", path_cap);

  auto* seg = app.add_subcommand("segal", "Segal-condition operations");
  auto* seg_check = seg->add_subcommand("check", "check a truncated functor from JSON");
  seg_check->add_option("--json", json_file)->required();
  auto* seg_tomonad = seg->add_subcommand("to-monad", "convert a Segal functor to a monad section");
  seg_tomonad->add_option("--json", json_file)->required();

  auto* span = app.add_subcommand("span", "span operations");
  auto* span_comp = span->add_subcommand("compose", "compose two spans from JSON");
  span_comp->add_option("--json", json_file, "file with {first: span, second: span}")->required();

  auto* mon = app.add_subcommand("monad", "monad sections in pattern-shaped spans");
  auto* mon_verify = mon->add_subcommand("verify", "validate a monad section from JSON");
  mon_verify->add_option("--json", json_file)->required();
  auto* mon_enum = mon->add_subcommand("enumerate", "enumerate law-satisfying sections");
  add_pattern_opt(mon_enum);
  mon_enum->add_option("--graph", graph_file, "PGraph JSON file")->required();
  mon_enum->add_option("--candidate-cap", candidate_cap);
  auto* mon_toseg = mon->add_subcommand("to-segal", "nerve of a monad section");
  mon_toseg->add_option("--json", json_file)->required();

  auto* exp = app.add_subcommand("export", "exports");
  auto* exp_dot = exp->add_subcommand("dot", "DOT for a finite category from JSON");
  exp_dot->add_option("--json", json_file)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (pat_fact->parsed()) {
      auto p = make_pattern(pattern_id, bound);
      PatMor f{source_text, morphism_text, target_text};
      auto [i, a] = p->factorize(f);
      std::cout << "inert:  " << i.src << " >-> " << i.dst << "  " << i.key << "\n";
      std::cout << "active: " << a.src << " ~> " << a.dst << "  " << a.key << "\n";
      return kOk;
    }
    if (pat_slice->parsed()) {
      auto p = make_pattern(pattern_id, bound);
      Slice s = elementary_slice(*p, object_text);
      if (format == "dot")
        std::cout << fincat_to_dot(s.cat);
      else if (format == "json")
        std::cout << fincat_to_json(s.cat) << "\n";
      else
        std::cout << slice_to_text(s);
      return kOk;
    }
    if (pat_hom->parsed()) {
      auto p = make_pattern(pattern_id, bound);
      for (const auto& f : p->hom(source_text, target_text)) {
        if (cls == "inert" && !p->is_inert(f)) continue;
        if (cls == "active" && !p->is_active(f)) continue;
        std::cout << f.key << "\n";
      }
      return kOk;
    }
    if (th_sect->parsed()) {
      GlobularSet g = sectors(parse_tree(tree_text));
      if (format == "json")
        std::cout << globular_to_json(g) << "\n";
      else {
        for (int k = 0; k <= g.dim(); ++k)
          std::cout << "dim " << k << ": " << g.cells[k].size() << " cells\n";
      }
      return kOk;
    }
    if (th_dec->parsed()) {
      auto d = globular_sum_decomposition(parse_tree(tree_text));
      for (size_t i = 0; i < d.size(); ++i) std::cout << (i ? " " : "") << d[i];
      std::cout << "\n";
      return kOk;
    }
    if (sat_check->parsed() || sat_sweep->parsed()) {
      auto p = make_pattern(pattern_id, bound);
      ColimitOptions opts;
      opts.path_cap = path_cap;
      std::vector<SaturationReport> reports;
      if (sat_check->parsed())
        reports.push_back(check_global_saturation(*p, object_text, opts));
      else
        reports = saturation_sweep(*p, opts);
      bool all = true;
      for (const auto& r : reports) {
        std::cout << r.object << ": " << (r.saturated ? "saturated" : "NOT saturated")
                  << " (slice " << r.slice_objects << " objects, colimit " << r.colimit_objects
                  << ")";
        if (!r.failure.empty()) std::cout << "  [" << r.failure << "]";
        std::cout << "\n";
        all = all && r.saturated;
      }
      return all ? kOk : kVerifyFailed;
    }
    if (seg_check->parsed()) {
      auto text = read_file(json_file);
      auto pid = nlohmann::ordered_json::parse(text).at("pattern").get<std::string>();
      TruncatedFunctor x = truncated_from_json(text, monad_pattern_instance(pid));
      auto reports = check_segal(x);
      bool all = true;
      for (const auto& r : reports) {
        std::cout << r.object << ": X = " << r.value_card << ", limit = " << r.limit_card << ", "
                  << (r.bijective ? "bijective" : "NOT bijective") << "\n";
        all = all && r.bijective;
      }
      return all ? kOk : kVerifyFailed;
    }
    if (seg_tomonad->parsed()) {
      auto text = read_file(json_file);
      auto pid = nlohmann::ordered_json::parse(text).at("pattern").get<std::string>();
      TruncatedFunctor x = truncated_from_json(text, monad_pattern_instance(pid));
      MonadSection m = segal_to_monad(x);
      std::cout << monad_to_json(m) << "\n";
      return kOk;
    }
    if (span_comp->parsed()) {
      auto text = read_file(json_file);
      auto j = nlohmann::ordered_json::parse(text);
      Span a = span_from_json(j.at("first").dump());
      Span b = span_from_json(j.at("second").dump());
      std::cout << span_to_json(compose_binary_spans(a, b)) << "\n";
      return kOk;
    }
    if (mon_verify->parsed()) {
      MonadSection m = monad_from_json(read_file(json_file), nullptr);
      MonadReport rep = validate_monad(m);
      if (rep.ok) {
        std::cout << "monad laws hold\n";
        return kOk;
      }
      for (const auto& f : rep.failures) std::cout << f << "\n";
      return kVerifyFailed;
    }
    if (mon_enum->parsed()) {
      auto p = monad_pattern_instance(pattern_id);
      PGraph g = pgraph_from_json(read_file(graph_file), p);
      EnumerateOptions opts;
      opts.candidate_cap = candidate_cap;
      auto res = enumerate_monads(p, g, default_monad_truncation(pattern_id), opts);
      std::cout << "candidates: " << res.candidates << "\n";
      std::cout << "valid (raw): " << res.raw_count << "\n";
      std::cout << "valid up to relabeling: " << res.monads.size() << "\n";
      return kOk;
    }
    if (mon_toseg->parsed()) {
      MonadSection m = monad_from_json(read_file(json_file), nullptr);
      std::cout << truncated_to_json(monad_to_segal(m)) << "\n";
      return kOk;
    }
    if (exp_dot->parsed()) {
      FinCat c = fincat_from_json(read_file(json_file));
      std::cout << fincat_to_dot(c);
      return kOk;
    }
  } catch (const resource_error& e) {
    std::cerr << "resource cap: " << e.what() << "\n";
    return kResource;
  } catch (const input_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  }
  std::cerr << "no subcommand\n";
  return kInputError;
}
