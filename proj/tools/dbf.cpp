// dbf: construct difference balanced functions, check their combinatorial
// properties, verify the associated designs, test sequence autocorrelation,
// and run exhaustive searches.
//
// Exit codes: 0 when every requested verdict is true, 1 when some verdict is
// false (the report is still emitted), 2 on usage or I/O errors.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dbf/constructions.hpp"
#include "dbf/designs.hpp"
#include "dbf/field.hpp"
#include "dbf/function_table.hpp"
#include "dbf/manifest.hpp"
#include "dbf/properties.hpp"
#include "dbf/search.hpp"
#include "dbf/sequences.hpp"

namespace {

using nlohmann::json;

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open input file: " + path);
  return json::parse(in);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << text;
}

void emit(const json& doc, const std::string& out_path) {
  std::string text = doc.dump(2) + "\n";
  if (out_path.empty())
    std::cout << text;
  else
    write_text(out_path, text);
}

struct ConstructArgs {
  std::string family;
  int64_t p = 3, m = 1, n = 2;
  int64_t k = 0, ell = 0;
  std::string out;
};

int run_construct(const ConstructArgs& a) {
  auto spec = dbf::FieldSpec::build(a.p, a.m, a.n);
  std::optional<dbf::FunctionTable> table;
  json extra = json::object();

  if (a.family == "trace") {
    table = dbf::trace_function(spec);
  } else if (a.family == "hg") {
    if (a.k <= 0 || a.ell <= 0) throw std::runtime_error("--family hg requires --k and --ell");
    auto hg = dbf::helleseth_gong_detailed(spec, a.k, a.ell);
    table = hg.table;
    extra["hg_reading"] = json{{"j", hg.chosen.j},
                               {"symmetrized", hg.chosen.symmetrized},
                               {"u_residues", hg.chosen.u_residues}};
  } else if (a.family == "lin") {
    table = dbf::lin_function(spec);
  } else if (a.family == "product") {
    if (a.ell <= 0) throw std::runtime_error("--family product requires --ell");
    auto d1 = dbf::relative_trace_one_preimage(*spec, a.ell);
    auto d2 = dbf::subfield_trace_one_preimage(*spec, a.ell);
    auto product = dbf::rds_product(*spec, a.ell, d1, d2);
    table = dbf::from_rds(spec, product, 1);
    extra["product_set"] = product;
  } else {
    throw std::runtime_error("unknown family: " + a.family);
  }

  dbf::RunManifest manifest;
  manifest.subcommand = "construct";
  manifest.flags = json{{"family", a.family}, {"p", a.p}, {"m", a.m}, {"n", a.n}};
  if (a.k > 0) manifest.flags["k"] = a.k;
  if (a.ell > 0) manifest.flags["ell"] = a.ell;
  if (!a.out.empty()) manifest.outputs.push_back(a.out);
  manifest.field_fingerprint = spec->fingerprint();

  json doc = table->to_json();
  doc["manifest"] = manifest.to_json();
  for (auto& [k2, v] : extra.items()) doc[k2] = v;
  emit(doc, a.out);
  return 0;
}

struct CheckArgs {
  std::string in;
  std::string props = "balance,db,hom,ttb";
  std::string out;
};

int run_check(const CheckArgs& a) {
  dbf::FunctionTable table = dbf::FunctionTable::from_json(load_json(a.in));
  json reports = json::array();
  bool all_true = true;

  for (const std::string& prop : split_csv(a.props)) {
    dbf::PropertyReport r;
    if (prop == "balance") {
      r = dbf::is_balanced(table);
    } else if (prop == "db") {
      r = dbf::is_difference_balanced(table);
    } else if (prop == "hom") {
      r = dbf::homogeneity_degree(table);
    } else if (prop == "ttb") {
      r = dbf::is_two_tuple_balanced(table).first;
    } else if (prop == "shift") {
      r = dbf::balanced_shift(table);
    } else {
      throw std::runtime_error("unknown property: " + prop);
    }
    all_true = all_true && r.verdict;
    reports.push_back(r.to_json());
  }

  dbf::RunManifest manifest;
  manifest.subcommand = "check";
  manifest.flags = json{{"in", a.in}, {"props", a.props}};
  manifest.inputs.push_back(a.in);
  if (!a.out.empty()) manifest.outputs.push_back(a.out);
  manifest.field_fingerprint = table.field().fingerprint();

  emit(json{{"manifest", manifest.to_json()}, {"reports", reports}}, a.out);
  return all_true ? 0 : 1;
}

struct DesignArgs {
  std::string in;
  std::string verify = "gds,rds,dds,singer,chars,multipliers";
  std::string out;
};

int run_design(const DesignArgs& a) {
  dbf::FunctionTable table = dbf::FunctionTable::from_json(load_json(a.in));
  auto spec = table.spec_ptr();
  const auto& f = table.field();
  auto d = dbf::graph_set(table);
  json reports = json::array();
  bool all_true = true;
  auto push = [&](const dbf::PropertyReport& r) {
    all_true = all_true && r.verdict;
    reports.push_back(r.to_json());
  };

  for (const std::string& item : split_csv(a.verify)) {
    if (item == "gds") {
      push(dbf::verify_graph_gds(table));
    } else if (item == "rds") {
      for (int32_t b = 1; b < f.subfield_order(); ++b) {
        auto [elems, r] = dbf::preimage_rds(table, b);
        r.witness["b_index"] = b;
        r.witness["set"] = elems;
        push(r);
      }
    } else if (item == "dds") {
      auto [elems, r] = dbf::preimage_rds(table, 0);
      r.witness["b_index"] = 0;
      r.witness["set"] = elems;
      push(r);
    } else if (item == "singer") {
      for (int32_t b = 0; b < f.subfield_order(); ++b) {
        auto [elems, pre] = dbf::preimage_rds(table, b);
        auto [image, r] = dbf::singer_projection(f, elems);
        r.witness["b_index"] = b;
        r.witness["set"] = image;
        push(r);
      }
    } else if (item == "chars") {
      auto spectrum = dbf::character_spectrum(spec, d);
      dbf::PropertyReport r{"character_spectrum", spectrum.all_match(), nullptr};
      json cases = json::object();
      for (const auto& e : spectrum.entries) {
        std::string tag = dbf::to_string(e.tag);
        if (!cases.contains(tag))
          cases[tag] = json{{"expected_norm", e.expected_norm}, {"count", 0}};
        cases[tag]["count"] = cases[tag]["count"].get<int64_t>() + 1;
      }
      r.witness = json{{"cases", cases},
                       {"max_abs_error", spectrum.max_abs_error},
                       {"difference_counts_match", spectrum.difference_counts_match_gds}};
      push(r);
    } else if (item == "multipliers") {
      bool pair_ok = true;
      json pair_list = json::array();
      for (int32_t t = 1; t < f.subfield_order(); ++t) {
        auto r = dbf::multiplier_check(spec, d, 1, t);
        pair_ok = pair_ok && r.verdict && r.witness.value("additive_part_zero", false);
        pair_list.push_back(r.witness);
      }
      dbf::PropertyReport r{"multipliers", pair_ok, json{{"pair_form", pair_list}}};
      if (f.m() == 1) {
        auto found = dbf::find_function_multipliers(spec, d);
        json list = json::array();
        for (const auto& mult : found)
          list.push_back(json{{"t", mult.t},
                              {"translate_mult_log", mult.translate_mult_log},
                              {"translate_add_index", mult.translate_add_index},
                              {"additive_part_zero", mult.additive_part_zero}});
        r.witness["numerical"] = list;
      }
      push(r);
    } else {
      throw std::runtime_error("unknown design verification: " + item);
    }
  }

  dbf::RunManifest manifest;
  manifest.subcommand = "design";
  manifest.flags = json{{"in", a.in}, {"verify", a.verify}};
  manifest.inputs.push_back(a.in);
  if (!a.out.empty()) manifest.outputs.push_back(a.out);
  manifest.field_fingerprint = f.fingerprint();

  emit(json{{"manifest", manifest.to_json()}, {"reports", reports}}, a.out);
  return all_true ? 0 : 1;
}

struct AutocorrArgs {
  std::string in;
  int64_t tau = -1;
  bool all = false;
  std::string out;
  std::string export_digits;
};

int run_autocorr(const AutocorrArgs& a) {
  dbf::FunctionTable table = dbf::FunctionTable::from_json(load_json(a.in));
  dbf::PSequence s = dbf::to_sequence(table);

  if (!a.export_digits.empty()) {
    std::string digits;
    for (uint8_t sym : s.symbols) digits += static_cast<char>('0' + sym);
    digits += "\n";
    write_text(a.export_digits, digits);
  }

  std::vector<int64_t> taus;
  if (a.all) {
    for (int64_t t = 0; t < s.period; ++t) taus.push_back(t);
  } else {
    if (a.tau < 0) throw std::runtime_error("provide --tau or --all");
    taus.push_back(a.tau);
  }

  json lines = json::array();
  for (int64_t tau : taus) {
    auto ac = dbf::autocorrelation(s, tau);
    // the value is an integer exactly when the nonzero-residue counts agree
    bool integral = true;
    for (size_t c = 2; c < ac.counts.size(); ++c) integral = integral && ac.counts[c] == ac.counts[1];
    json entry{{"tau", tau}, {"counts", ac.counts}};
    if (integral) {
      int64_t v = ac.counts[0] - ac.counts[1];
      entry["value"] = v;
      std::cout << tau << ": " << v << "\n";
    } else {
      entry["value_re"] = ac.value.real();
      entry["value_im"] = ac.value.imag();
      std::cout << tau << ": " << ac.value.real() << (ac.value.imag() < 0 ? " - " : " + ")
                << std::abs(ac.value.imag()) << "i\n";
    }
    lines.push_back(entry);
  }

  dbf::RunManifest manifest;
  manifest.subcommand = "autocorr";
  manifest.flags = json{{"in", a.in}, {"all", a.all}};
  if (a.tau >= 0) manifest.flags["tau"] = a.tau;
  manifest.inputs.push_back(a.in);
  if (!a.out.empty()) manifest.outputs.push_back(a.out);
  if (!a.export_digits.empty()) manifest.outputs.push_back(a.export_digits);
  manifest.field_fingerprint = table.field().fingerprint();

  if (!a.out.empty())
    emit(json{{"manifest", manifest.to_json()},
              {"period", s.period},
              {"symbols", s.symbols},
              {"autocorrelation", lines}},
         a.out);
  return 0;
}

struct SearchArgs {
  int64_t p = 3, m = 1, n = 2;
  std::string mode = "full";
  int workers = 1;
  uint64_t budget = 1'000'000'000;
  uint64_t checkpoint_every = 1'000'000;
  std::string checkpoint;
  std::string resume;
  uint64_t samples = 0;
  int64_t seed = -1;
  std::string out;
};

int run_search(const SearchArgs& a) {
  dbf::SearchConfig config;
  config.spec = dbf::FieldSpec::build(a.p, a.m, a.n);
  if (a.mode == "full")
    config.mode = dbf::SearchMode::FullEnumeration;
  else if (a.mode == "homogeneous")
    config.mode = dbf::SearchMode::HomogeneousOnly;
  else if (a.mode == "random")
    config.mode = dbf::SearchMode::RandomSample;
  else
    throw std::runtime_error("unknown mode: " + a.mode);
  config.worker_count = a.workers;
  config.candidate_budget = a.budget;
  config.checkpoint_interval = a.checkpoint_every;
  config.checkpoint_path = a.checkpoint;
  config.resume_path = a.resume;
  if (config.mode == dbf::SearchMode::RandomSample) {
    if (a.seed < 0) throw std::runtime_error("--mode random requires --seed");
    if (a.samples == 0) throw std::runtime_error("--mode random requires --samples");
    config.seed = static_cast<uint64_t>(a.seed);
    config.sample_count = a.samples;
  }

  dbf::SearchReport report = dbf::enumerate_db(config);
  std::cerr << "search finished in " << report.wall_seconds << " s, " << report.visited
            << " candidates, " << report.db_count << " difference balanced, "
            << report.counterexample_count << " counterexamples\n";

  dbf::RunManifest manifest;
  manifest.subcommand = "search";
  manifest.flags = json{{"p", a.p},       {"m", a.m},           {"n", a.n},
                        {"mode", a.mode}, {"budget", a.budget}, {"workers", a.workers}};
  if (config.mode == dbf::SearchMode::RandomSample) {
    manifest.flags["seed"] = a.seed;
    manifest.flags["samples"] = a.samples;
  }
  if (!a.out.empty()) manifest.outputs.push_back(a.out);
  manifest.field_fingerprint = config.spec->fingerprint();

  json doc = report.to_json();
  doc["manifest"] = manifest.to_json();
  emit(doc, a.out);
  return report.counterexample_count == 0 ? 0 : 1;
}

// Structural validation of any document this tool emits.
int run_validate(const std::string& path) {
  json doc = load_json(path);
  bool ok = false;
  if (doc.contains("field") && doc.contains("values")) {
    dbf::FunctionTable::from_json(doc);  // throws when malformed
    ok = true;
  } else if (doc.contains("p") && doc.contains("modulus")) {
    dbf::FieldSpec::from_json(doc);
    ok = true;
  } else if (doc.contains("reports")) {
    ok = doc.contains("manifest");
    for (const auto& r : doc.at("reports"))
      ok = ok && r.contains("property") && r.contains("verdict");
  } else if (doc.contains("survivors")) {
    ok = doc.contains("manifest") && doc.contains("db_count");
  } else if (doc.contains("autocorrelation")) {
    ok = doc.contains("manifest") && doc.contains("period");
  }
  std::cout << (ok ? "valid" : "unrecognized document") << "\n";
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"difference balanced functions: construction, verification, search"};
  app.require_subcommand(1);

  ConstructArgs cons;
  auto* c = app.add_subcommand("construct", "build a function table");
  c->add_option("--family", cons.family, "trace|hg|lin|product")->required();
  c->add_option("--p", cons.p, "odd prime")->required();
  c->add_option("--m", cons.m, "q = p^m");
  c->add_option("--n", cons.n, "extension degree")->required();
  c->add_option("--k", cons.k, "hg: n = (2*ell+1)*k");
  c->add_option("--ell", cons.ell, "hg/product parameter");
  c->add_option("-o,--out", cons.out, "output file (stdout when omitted)");

  CheckArgs chk;
  auto* k = app.add_subcommand("check", "run property checkers on a function table");
  k->add_option("--in", chk.in, "function table JSON")->required();
  k->add_option("--props", chk.props, "comma list: balance,db,hom,ttb,shift");
  k->add_option("-o,--out", chk.out, "output file");

  DesignArgs des;
  auto* dsub = app.add_subcommand("design", "verify the associated designs");
  dsub->add_option("--in", des.in, "function table JSON")->required();
  dsub->add_option("--verify", des.verify, "comma list: gds,rds,dds,singer,chars,multipliers");
  dsub->add_option("-o,--out", des.out, "output file");

  AutocorrArgs ac;
  auto* asub = app.add_subcommand("autocorr", "sequence autocorrelation (q = p)");
  asub->add_option("--in", ac.in, "function table JSON")->required();
  asub->add_option("--tau", ac.tau, "single shift");
  asub->add_flag("--all", ac.all, "all shifts");
  asub->add_option("--export", ac.export_digits, "write the sequence as plain digits");
  asub->add_option("-o,--out", ac.out, "output file");

  SearchArgs sea;
  auto* ssub = app.add_subcommand("search", "enumerate difference balanced functions");
  ssub->add_option("--p", sea.p, "odd prime")->required();
  ssub->add_option("--m", sea.m, "q = p^m");
  ssub->add_option("--n", sea.n, "extension degree")->required();
  ssub->add_option("--mode", sea.mode, "full|homogeneous|random");
  ssub->add_option("--workers", sea.workers, "worker thread count");
  ssub->add_option("--budget", sea.budget, "max candidate count");
  ssub->add_option("--ckpt-every", sea.checkpoint_every, "checkpoint interval");
  ssub->add_option("--checkpoint", sea.checkpoint, "checkpoint output path");
  ssub->add_option("--resume", sea.resume, "resume from checkpoint");
  ssub->add_option("--samples", sea.samples, "random mode: sample count");
  ssub->add_option("--seed", sea.seed, "random mode: required seed");
  ssub->add_option("-o,--out", sea.out, "output file");

  std::string validate_path;
  auto* vsub = app.add_subcommand("validate", "validate a JSON document emitted by this tool");
  vsub->add_option("--in", validate_path, "document path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*c) return run_construct(cons);
    if (*k) return run_check(chk);
    if (*dsub) return run_design(des);
    if (*asub) return run_autocorr(ac);
    if (*ssub) return run_search(sea);
    if (*vsub) return run_validate(validate_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
