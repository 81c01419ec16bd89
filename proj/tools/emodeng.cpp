// emodeng: command-line front end.
// Exit status: 0 success, 1 processing or store error, 2 config, parse or usage error.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "emodeng/candidate_store.hpp"
#include "emodeng/config.hpp"
#include "emodeng/error.hpp"
#include "emodeng/morph_engine.hpp"
#include "emodeng/pipeline.hpp"
#include "emodeng/server.hpp"
#include "emodeng/syntax_engine.hpp"

#ifndef EMODENG_VERSION
#define EMODENG_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using nlohmann::json;
using namespace emodeng;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitProcessing = 1;
constexpr int kExitConfig = 2;

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot read " + p.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const fs::path& p, const std::string& s) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << s;
  if (!out) throw Error("cannot write " + p.string());
}

// Runs f over every input on up to hardware_concurrency threads; results
// keep input order.
template <typename F>
auto parallel_map(const std::vector<std::string>& inputs, F f) {
  using R = decltype(f(inputs.front()));
  std::vector<std::optional<R>> out(inputs.size());
  std::vector<std::exception_ptr> errors(inputs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < inputs.size();) {
      try {
        out[i] = f(inputs[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::size_t n = std::min<std::size_t>(inputs.size(), std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::thread> threads;
  for (std::size_t t = 1; t < n; ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<R> result;
  for (auto& o : out) result.push_back(std::move(*o));
  return result;
}

std::string annotations_jsonl(const TranscriptionResult& r) {
  std::string out;
  for (const auto& a : r.annotations) out += to_json(a, r.doc).dump() + '\n';
  return out;
}

std::string doc_name(const std::string& path) { return fs::path(path).filename().string(); }

std::string fmt_pct(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(2) << v;
  return os.str();
}

std::string stats_table(const std::vector<Report>& docs, const Report& total) {
  std::ostringstream os;
  auto row = [&](const std::string& name, const Report& r) {
    json j = r.to_json();
    os << std::left << std::setw(24) << name << std::right << std::setw(8) << r.corpus_size
       << std::setw(10) << r.distinct_words() << std::setw(10) << r.unknown_distinct()
       << std::setw(10) << r.unknown_occurrences() << std::setw(10)
       << fmt_pct(j["unknown_percent_of_distinct"].get<double>()) << std::setw(10)
       << fmt_pct(j["unknown_percent_of_corpus"].get<double>()) << '\n';
  };
  os << std::left << std::setw(24) << "document" << std::right << std::setw(8) << "words"
     << std::setw(10) << "distinct" << std::setw(10) << "unknown" << std::setw(10) << "unk.occ"
     << std::setw(10) << "%dist" << std::setw(10) << "%words" << '\n';
  for (const auto& d : docs) row(d.documents.empty() ? "" : d.documents.front(), d);
  row("TOTAL", total);
  os << "\nunknown categories (share of distinct unknown words)\n";
  auto counts = total.category_counts();
  auto pcts = total.category_percentages();
  for (const auto& [c, n] : counts)
    os << std::left << std::setw(16) << to_string(c) << std::right << std::setw(8) << n
       << std::setw(10) << fmt_pct(pcts.empty() ? 0.0 : pcts[c]) << '\n';
  return os.str();
}

// Prints every error of one data file as file:line:col: message.
std::size_t check_file(const fs::path& path, const std::string& kind, const ParadigmTable* paradigms) {
  std::size_t errors = 0;
  auto report = [&](const ParseError& e) {
    std::cerr << path.string() << ':' << e.line() << ':' << e.column() << ": " << e.bare_message() << '\n';
    ++errors;
  };
  if (!fs::is_regular_file(path)) {
    std::cerr << path.string() << ": no such file\n";
    return 1;
  }
  std::string text = read_text(path);
  try {
    if (kind == "paradigms") {
      ParadigmTable::parse(text, path.string());
    } else if (kind == "morph") {
      parse_morph_rules(text, path.string());
    } else if (kind == "syntax") {
      parse_syntax_rules(text, path.string());
    } else {
      std::istringstream in(text);
      std::string line;
      std::size_t n = 0;
      while (std::getline(in, line)) {
        ++n;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        try {
          LexEntry e = parse_entry_line(line, n, path.string());
          if (auto flx = e.features.value("FLX"); flx && paradigms && !paradigms->find(*flx)) {
            auto col = line.find("FLX=");
            throw ParseError("unknown paradigm '" + std::string(*flx) + "'", n,
                             col == std::string::npos ? 1 : col + 1, path.string());
          }
        } catch (const ParseError& e) {
          report(e);
        }
      }
    }
  } catch (const ParseError& e) {
    report(e);
  }
  return errors;
}

std::string guess_kind(const fs::path& p) {
  std::string name = p.filename().string();
  if (name.find("paradigm") != std::string::npos) return "paradigms";
  if (p.extension() == ".rules") return name.find("syntax") != std::string::npos ? "syntax" : "morph";
  return "dictionary";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Normalize 17th-century English text to contemporary spelling and syntax"};
  app.require_subcommand(0, 1);
  std::string config_path = "emodeng.toml";
  app.add_option("-c,--config", config_path, "Configuration file")->capture_default_str();
  bool version = false;
  app.add_flag("-V,--version", version, "Print tool and data-file versions");

  auto* normalize = app.add_subcommand("normalize", "Transcribe documents into modern English");
  std::vector<std::string> norm_in;
  std::string norm_out, norm_outdir;
  bool norm_ann = false;
  normalize->add_option("inputs", norm_in, "Input text files")->required()->check(CLI::ExistingFile);
  normalize->add_option("-o,--output", norm_out, "Output file (single input)");
  normalize->add_option("--outdir", norm_outdir, "Write <name>.modern.txt files into this directory");
  normalize->add_flag("--annotations", norm_ann, "Also write .annotations.jsonl and .report.json sidecars");

  auto* annotate = app.add_subcommand("annotate", "Write standoff annotations as JSON lines");
  std::vector<std::string> ann_in;
  std::string ann_out;
  annotate->add_option("inputs", ann_in, "Input text files")->required()->check(CLI::ExistingFile);
  annotate->add_option("-o,--output", ann_out, "Output file (default stdout)");

  auto* stats = app.add_subcommand("stats", "Per-document and aggregate unknown-word statistics");
  std::vector<std::string> stats_in;
  bool stats_json = false;
  stats->add_option("inputs", stats_in, "Input text files")->required()->check(CLI::ExistingFile);
  stats->add_flag("--json", stats_json, "Print JSON");

  auto* cands = app.add_subcommand("candidates", "Record or review candidate dictionary entries");
  std::vector<std::string> cand_in;
  std::string store_dir;
  cands->add_option("inputs", cand_in, "Input text files to mine for candidates")->check(CLI::ExistingFile);
  cands->add_option("--store", store_dir, "Store directory (default from config)");
  cands->require_subcommand(0, 1);
  auto* c_list = cands->add_subcommand("list", "List candidates");
  std::string list_status = "pending";
  bool list_json = false;
  c_list->add_option("--status", list_status, "pending, accepted, rejected or all")->capture_default_str();
  c_list->add_flag("--json", list_json, "Print JSON");
  auto* c_accept = cands->add_subcommand("accept", "Accept a candidate into the user dictionary");
  auto* c_reject = cands->add_subcommand("reject", "Reject a candidate");
  auto* c_reset = cands->add_subcommand("reset", "Return a rejected candidate to pending");
  std::string cand_id, cand_entry, reviewer;
  for (auto* s : {c_accept, c_reject, c_reset}) s->add_option("id", cand_id, "Candidate id")->required();
  c_accept->add_option("--entry", cand_entry, "Edited dictionary line to store instead");
  for (auto* s : {c_accept, c_reject}) s->add_option("--reviewer", reviewer, "Reviewer name");

  auto* lexcmd = app.add_subcommand("lexicon", "Dictionary tools");
  lexcmd->require_subcommand(1);
  auto* check = lexcmd->add_subcommand("check", "Validate dictionaries, paradigms and rule files");
  std::vector<std::string> check_in;
  std::string check_kind = "auto";
  check->add_option("files", check_in, "Files to check")->required();
  check->add_option("--kind", check_kind, "auto, dictionary, paradigms, morph or syntax")
      ->check(CLI::IsMember({"auto", "dictionary", "paradigms", "morph", "syntax"}))
      ->capture_default_str();

  auto* serve = app.add_subcommand("serve", "Start the review HTTP API");
  std::string addr, static_dir;
  serve->add_option("--addr", addr, "host:port (default from config)");
  serve->add_option("--static", static_dir, "Directory of UI assets to serve at /");
  serve->add_option("--store", store_dir, "Store directory (default from config)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    bool need_config = version || app.got_subcommand(normalize) || app.got_subcommand(annotate) ||
                       app.got_subcommand(stats) || app.got_subcommand(cands) || app.got_subcommand(serve);
    if (!need_config && !app.got_subcommand(lexcmd)) {
      std::cout << app.help();
      return kExitOk;
    }

    if (app.got_subcommand(lexcmd)) {
      std::optional<ParadigmTable> paradigms;
      if (fs::exists(config_path)) paradigms = ParadigmTable::load(load_config(config_path).paradigms);
      std::size_t errors = 0;
      for (const auto& f : check_in)
        errors += check_file(f, check_kind == "auto" ? guess_kind(f) : check_kind,
                             paradigms ? &*paradigms : nullptr);
      if (errors) return kExitConfig;
      std::cout << check_in.size() << " file(s) ok\n";
      return kExitOk;
    }

    PipelineConfig config = load_config(config_path);
    Pipeline pipeline(config);

    if (version) {
      std::cout << "emodeng " << EMODENG_VERSION << '\n';
      for (const auto& [file, v] : pipeline.data_versions())
        std::cout << "  " << file << ' ' << (v.empty() ? "unversioned" : v) << '\n';
      return kExitOk;
    }

    auto run = [&](const std::vector<std::string>& inputs) {
      return parallel_map(inputs, [&](const std::string& p) { return pipeline.transcribe(read_text(p), doc_name(p)); });
    };

    if (app.got_subcommand(normalize)) {
      if (!norm_out.empty() && norm_in.size() != 1) throw CLI::ValidationError("-o takes a single input");
      auto results = run(norm_in);
      for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        fs::path stem = fs::path(norm_in[i]).stem();
        fs::path out;
        if (!norm_out.empty()) out = norm_out;
        else if (!norm_outdir.empty()) out = fs::path(norm_outdir) / (stem.string() + ".modern.txt");
        if (out.empty()) std::cout << r.output;
        else write_text(out, r.output);
        if (norm_ann) {
          fs::path base = out.empty() ? stem : out.parent_path() / stem;
          write_text(base.string() + ".annotations.jsonl", annotations_jsonl(r));
          write_text(base.string() + ".report.json", r.report.to_json().dump(2) + '\n');
        }
      }
      return kExitOk;
    }

    if (app.got_subcommand(annotate)) {
      std::string all;
      for (const auto& r : run(ann_in)) all += annotations_jsonl(r);
      if (ann_out.empty()) std::cout << all;
      else write_text(ann_out, all);
      return kExitOk;
    }

    if (app.got_subcommand(stats)) {
      std::vector<Report> docs;
      for (auto& r : run(stats_in)) docs.push_back(std::move(r.report));
      Report total = report_stats(docs);
      if (stats_json) {
        json d = json::array();
        for (const auto& r : docs) d.push_back(r.to_json());
        std::cout << json{{"documents", d}, {"aggregate", total.to_json()}}.dump(2) << '\n';
      } else {
        std::cout << stats_table(docs, total);
      }
      return kExitOk;
    }

    fs::path store_path = store_dir.empty() ? config.store_dir : fs::path(store_dir);
    if (store_path.empty()) throw ConfigError("no store directory: set [store] dir or pass --store");

    if (app.got_subcommand(cands)) {
      bool reading = cands->got_subcommand(c_list);
      auto store = CandidateStore::open(store_path, reading);
      if (cands->got_subcommand(c_list)) {
        std::optional<CandidateStatus> status;
        if (list_status != "all") {
          status = parse_status(list_status);
          if (!status) throw CLI::ValidationError("unknown status " + list_status);
        }
        auto list = store.list(status);
        if (list_json) {
          json out = json::array();
          for (const auto& c : list) out.push_back(to_json(c, false));
          std::cout << out.dump(2) << '\n';
        } else {
          for (const auto& c : list)
            std::cout << c.id << '\t' << to_string(c.status) << '\t' << c.contexts.size() << '\t'
                      << serialize_entry(c.entry) << '\n';
        }
        return kExitOk;
      }
      if (cands->got_subcommand(c_accept) || cands->got_subcommand(c_reject)) {
        bool accept = cands->got_subcommand(c_accept);
        std::optional<LexEntry> edited;
        if (!cand_entry.empty()) {
          edited = parse_entry_line(cand_entry, 1, "--entry");
          edited->tier = kTierUser;
        }
        auto c = store.decide(cand_id, accept ? CandidateStatus::Accepted : CandidateStatus::Rejected,
                              edited, reviewer, config.user_dictionary());
        std::cout << c.id << '\t' << to_string(c.status) << '\t' << serialize_entry(c.entry) << '\n';
        return kExitOk;
      }
      if (cands->got_subcommand(c_reset)) {
        auto c = store.reset(cand_id);
        std::cout << c.id << '\t' << to_string(c.status) << '\n';
        return kExitOk;
      }
      if (cand_in.empty()) throw CLI::ValidationError("candidates needs input files or a subcommand");
      auto results = run(cand_in);
      std::string run_id = "cli-" + utc_timestamp();
      std::size_t new_ids = 0, new_contexts = 0;
      for (const auto& r : results) {
        auto delta = store.record(r.candidates, run_id);
        new_ids += delta.new_ids.size();
        new_contexts += delta.new_contexts;
      }
      std::cout << new_ids << " new candidate(s), " << new_contexts << " new context(s)\n";
      return kExitOk;
    }

    if (app.got_subcommand(serve)) {
      auto [host, port] = parse_address(addr.empty() ? config.addr : addr);
      ReviewServer server(pipeline, CandidateStore::open(store_path), config.fixtures, static_dir);
      int bound = server.bind(host, port);
      std::cerr << "listening on http://" << host << ':' << bound << '\n';
      server.listen();
      return kExitOk;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitProcessing;
  }
  return kExitOk;
}
