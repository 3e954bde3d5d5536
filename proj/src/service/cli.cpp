#include "alertlens/service/cli.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>

#include "CLI11.hpp"
#include "alertlens/core/error.hpp"
#include "alertlens/service/api.hpp"
#include "alertlens/service/server.hpp"
#include "alertlens/synth/default_policies.hpp"
#include "alertlens/synth/generator.hpp"

namespace alertlens::cli {
namespace {

namespace fs = std::filesystem;

struct GenerateOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> users;
  std::optional<int> days;
  std::optional<std::size_t> target_alerts;
  std::optional<std::size_t> noise_reserve;
  std::optional<std::string> start_date;
  std::vector<std::string> scenarios;
  std::string out_dir;
};

struct QueryOptions {
  std::string subject;
  std::map<std::string, std::string> params;
  std::vector<std::string> extra;
  std::string format = "json";
};

std::string stats_line(const synth::CorpusStats& s) {
  std::ostringstream o;
  o << "alerts=" << s.total_alerts << " users=" << s.distinct_alerting_users << std::fixed << std::setprecision(4)
    << " single_event_fraction=" << s.single_event_fraction << " rank1=" << s.rank1_count
    << " rank100=" << s.rank100_count << std::setprecision(2) << " rank_ratio=" << s.rank_ratio()
    << std::setprecision(4) << " max_week_share=" << s.max_week_share;
  return o.str();
}

int generate(const GenerateOptions& o, const fs::path& data_dir, std::ostream& out) {
  synth::GeneratorConfig config;
  if (!o.config_path.empty()) config = Json::parse(read_file(o.config_path)).get<synth::GeneratorConfig>();
  if (o.seed) config.seed = *o.seed;
  if (o.users) config.user_count = *o.users;
  if (o.days) config.day_count = *o.days;
  if (o.target_alerts) config.target_alerts = *o.target_alerts;
  if (o.noise_reserve) config.noise_reserve = *o.noise_reserve;
  if (o.start_date) config.start_day = parse_day(*o.start_date);
  synth::validate(config);

  std::vector<synth::ScenarioKind> kinds;
  if (o.scenarios.empty() || (o.scenarios.size() == 1 && o.scenarios[0] == "all")) {
    kinds = synth::all_scenarios();
  } else if (!(o.scenarios.size() == 1 && o.scenarios[0] == "none")) {
    for (const auto& s : o.scenarios) kinds.push_back(synth::parse_scenario_kind(s));
  }
  const auto policies = synth::default_policies();
  synth::Corpus corpus = synth::generate(config, policies);
  out << "base:    " << stats_line(synth::corpus_stats(corpus)) << "\n";
  for (auto k : kinds) corpus = synth::inject_scenario(std::move(corpus), {k, Json::object()});
  const fs::path dir = o.out_dir.empty() ? data_dir : fs::path(o.out_dir);
  fs::create_directories(dir);
  synth::write_corpus(corpus, dir);
  out << "corpus:  " << stats_line(synth::corpus_stats(corpus)) << "\n";
  if (!kinds.empty()) {
    const auto cleaned = normalize(synth::recommended_exclusions(corpus.manifest));
    out << "cleaned: " << stats_line(synth::corpus_stats(corpus.alerts, cleaned)) << "\n";
  }
  out << "wrote " << dir.string() << "\n";
  return 0;
}

int ingest(const std::vector<std::string>& files, const fs::path& data_dir, std::ostream& out) {
  AlertStore store;
  const fs::path target = data_dir / "alerts.jsonl";
  if (fs::exists(target)) {
    std::ifstream in(target);
    store.ingest_jsonl(in);
  }
  Json reports = Json::object();
  for (const auto& f : files) {
    std::ifstream in(f);
    if (!in) throw Error(ErrorCode::kIo, "cannot open " + f);
    reports[f] = store.ingest_jsonl(in);
  }
  fs::create_directories(data_dir);
  const fs::path tmp = data_dir / "alerts.jsonl.tmp";
  {
    std::ofstream o(tmp);
    for (const Alert& a : store.snapshot()->t().alerts) write_alert_line(o, a);
    if (!o) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
  }
  fs::rename(tmp, target);
  out << Json{{"reports", reports}, {"stored_alerts", store.size()}, {"path", target.string()}}.dump(2) << "\n";
  return 0;
}

int clean(const std::string& exclusions_path, const std::string& manifest_path, bool clear, const fs::path& data_dir,
          std::ostream& out) {
  ExclusionSet set;
  if (!exclusions_path.empty()) set = parse_exclusions(read_file(exclusions_path));
  if (!manifest_path.empty()) {
    const auto rec = synth::recommended_exclusions(Json::parse(read_file(manifest_path)));
    set.excluded_ranges.insert(set.excluded_ranges.end(), rec.excluded_ranges.begin(), rec.excluded_ranges.end());
    set.excluded_users.insert(set.excluded_users.end(), rec.excluded_users.begin(), rec.excluded_users.end());
  }
  if (!clear && exclusions_path.empty() && manifest_path.empty()) {
    throw Error(ErrorCode::kConfig, "clean needs --exclusions, --manifest or --clear");
  }
  set = normalize(std::move(set));
  fs::create_directories(data_dir);
  write_file((data_dir / "exclusions.json").string(), Json(set).dump(2));
  ServiceConfig config;
  config.data_dir = data_dir;
  Api api(config);
  auto snap = api.store().snapshot();
  std::size_t excluded = 0;
  for (auto e : snap->excluded) excluded += e;
  out << Json{{"exclusions", set}, {"fingerprint", snap->exclusion_fingerprint}, {"excluded_alerts", excluded},
              {"visible_alerts", snap->t().size() - excluded}}
             .dump(2)
      << "\n";
  return 0;
}

int stats(const fs::path& data_dir, bool weeks, std::ostream& out) {
  ServiceConfig config;
  config.data_dir = data_dir;
  Api api(config);
  auto snap = api.store().snapshot();
  Json j = synth::corpus_stats(snap->t().alerts, snap->exclusions);
  if (!weeks) j.erase("weekly_totals");
  out << j.dump(2) << "\n";
  return 0;
}

void print_table(const std::string& subject, const Json& body, std::ostream& out) {
  if (subject == "grid") {
    for (const auto& c : body.at("cells")) {
      out << c.at("row_key").get<std::string>() << '\t' << c.at("col_key").get<std::string>() << '\t'
          << c.at("alert_count").get<std::size_t>() << '\n';
    }
  } else if (subject == "histogram") {
    for (const auto& w : body.at("weeks")) {
      out << w.at("week_start").get<std::string>() << '\t' << w.at("alert_count").get<std::size_t>() << '\n';
    }
  } else {
    out << body.dump(2) << '\n';
  }
}

int query(const QueryOptions& q, const fs::path& data_dir, std::ostream& out, std::ostream& err) {
  static const std::map<std::string, std::string> kPaths{
      {"histogram", "/api/histogram"}, {"grid", "/api/grid"},        {"alerts", "/api/alerts"},
      {"facet", "/api/facet"},         {"graph", "/api/graph"},      {"graph-node", "/api/graph/node"},
      {"graph-edge", "/api/graph/edge"}};
  auto path = kPaths.find(q.subject);
  if (path == kPaths.end()) throw Error(ErrorCode::kSpec, "unknown query subject '" + q.subject + "'");
  ApiRequest r;
  r.path = path->second;
  r.params = q.params;
  for (const auto& kv : q.extra) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::kSpec, "--param expects key=value");
    r.params[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  ServiceConfig config;
  config.data_dir = data_dir;
  Api api(config);
  const ApiResponse resp = api.handle(r);
  if (resp.status != 200) {
    err << resp.body << "\n";
    return 2;
  }
  if (q.format == "table" && resp.content_type == "application/json") {
    print_table(q.subject, Json::parse(resp.body), out);
  } else {
    out << resp.body;
    if (resp.content_type == "application/json") out << "\n";
  }
  return 0;
}

int export_cmd(const std::string& handle, const std::string& format, const std::string& out_path,
               const fs::path& data_dir, std::ostream& out, std::ostream& err) {
  ServiceConfig config;
  config.data_dir = data_dir;
  Api api(config);
  ApiRequest r;
  r.path = "/api/export";
  r.params = {{"handle", handle}, {"format", format}};
  const ApiResponse resp = api.handle(r);
  if (resp.status != 200) {
    err << resp.body << "\n";
    return 2;
  }
  if (out_path.empty()) {
    out << resp.body;
  } else {
    write_file(out_path, resp.body);
  }
  return 0;
}

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"alertlens: insider-threat alert analytics"};
  app.require_subcommand(1);
  std::optional<std::string> data_flag;
  app.add_option("--data", data_flag, "data directory (default $ALERTLENS_DATA or ./data)");
  app.fallthrough();

  GenerateOptions gen;
  auto* generate_cmd = app.add_subcommand("generate", "generate a synthetic corpus");
  generate_cmd->add_option("--config", gen.config_path, "generator config JSON");
  generate_cmd->add_option("--seed", gen.seed);
  generate_cmd->add_option("--users", gen.users);
  generate_cmd->add_option("--days", gen.days);
  generate_cmd->add_option("--target-alerts", gen.target_alerts);
  generate_cmd->add_option("--noise-reserve", gen.noise_reserve);
  generate_cmd->add_option("--start-date", gen.start_date);
  generate_cmd->add_option("--scenario", gen.scenarios, "scenario kind, 'all' (default) or 'none'; repeatable");
  generate_cmd->add_option("--out", gen.out_dir, "output directory (default: data directory)");

  std::vector<std::string> ingest_files;
  auto* ingest_cmd = app.add_subcommand("ingest", "ingest alert JSONL files into the data directory");
  ingest_cmd->add_option("files", ingest_files)->required();

  std::string exclusions_path, manifest_path;
  bool clear = false;
  auto* clean_cmd = app.add_subcommand("clean", "set the exclusion config");
  clean_cmd->add_option("--exclusions", exclusions_path, "exclusion JSON file");
  clean_cmd->add_option("--manifest", manifest_path, "exclude the noise recorded in a corpus manifest");
  clean_cmd->add_flag("--clear", clear, "remove all exclusions");

  bool weeks = false;
  auto* stats_cmd = app.add_subcommand("stats", "corpus statistics of the visible alerts");
  stats_cmd->add_flag("--weeks", weeks, "include weekly totals");

  QueryOptions q;
  auto* query_cmd = app.add_subcommand("query", "run an API query and print the result");
  query_cmd->add_option("subject", q.subject, "histogram|grid|alerts|facet|graph|graph-node|graph-edge")->required();
  for (const char* key : {"view", "start", "end", "user", "policies", "top_n", "offset", "resources", "handle", "ids",
                          "x", "y", "color", "seed", "kind", "node", "resource"}) {
    std::string flag = std::string("--") + key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    query_cmd->add_option_function<std::string>(flag, [&q, key](const std::string& v) { q.params[key] = v; });
  }
  query_cmd->add_flag_function("--permissive", [&q](std::int64_t) { q.params["permissive"] = "true"; });
  query_cmd->add_option("--param", q.extra, "raw key=value parameter; repeatable");
  query_cmd->add_option("--format", q.format, "json or table")->check(CLI::IsMember({"json", "table"}));

  std::string handle, format = "csv", out_path;
  auto* export_cmd_ = app.add_subcommand("export", "export a selection");
  export_cmd_->add_option("--handle", handle)->required();
  export_cmd_->add_option("--format", format)->check(CLI::IsMember({"csv", "jsonl"}));
  export_cmd_->add_option("--out", out_path, "file (default stdout)");

  ServiceConfig serve_config;
  std::string static_dir, serve_exclusions;
  auto* serve_cmd = app.add_subcommand("serve", "run the HTTP API");
  serve_cmd->add_option("--host", serve_config.host);
  serve_cmd->add_option("--port", serve_config.port);
  serve_cmd->add_option("--static", static_dir, "console assets directory");
  serve_cmd->add_option("--exclusions", serve_exclusions, "exclusion config (default <data>/exclusions.json)");
  serve_cmd->add_option("--log-level", serve_config.log_level);

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  const fs::path data_dir = resolve_data_dir(data_flag);
  try {
    if (*generate_cmd) return generate(gen, data_dir, out);
    if (*ingest_cmd) return ingest(ingest_files, data_dir, out);
    if (*clean_cmd) return clean(exclusions_path, manifest_path, clear, data_dir, out);
    if (*stats_cmd) return stats(data_dir, weeks, out);
    if (*query_cmd) return query(q, data_dir, out, err);
    if (*export_cmd_) return export_cmd(handle, format, out_path, data_dir, out, err);
    if (*serve_cmd) {
      serve_config.data_dir = data_dir;
      if (!static_dir.empty()) serve_config.static_dir = static_dir;
      if (!serve_exclusions.empty()) serve_config.exclusions_path = serve_exclusions;
      Api api(serve_config);
      serve(api);
      return 0;
    }
  } catch (const Error& e) {
    err << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace alertlens::cli
