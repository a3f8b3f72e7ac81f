// cuckoo-prf: command-line driver for the experiments.
//
// Exit status: 0 pass, 1 assertion failure, 2 configuration error.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cuckoo_prf/experiments.hpp"

namespace {

using namespace cuckoo_prf;
using experiments::Config;
using json = nlohmann::ordered_json;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

struct Common {
  std::string out = "-";
  std::string format = "csv";
  std::string config;
};

// One named knob, settable from the command line or the config file.
struct Field {
  std::function<std::string()> get;
  std::function<void(const std::string &)> set;
};

template <typename T> T parse_number(const std::string &key, const std::string &text) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(text, &used, 0);
  } catch (const std::exception &) {
    used = 0;
  }
  if (used == 0 || used != text.size() || text.front() == '-')
    throw ConfigError("config: '" + key + "' expects a non-negative integer, got '" + text + "'");
  if (v > std::numeric_limits<T>::max())
    throw ConfigError("config: '" + key + "' is out of range");
  return static_cast<T>(v);
}

template <typename T> Field number_field(const std::string &key, T &ref) {
  return {[&ref] { return std::to_string(ref); }, [key, &ref](const std::string &v) { ref = parse_number<T>(key, v); }};
}

Field format_field(std::string &ref) {
  return {[&ref] { return ref; },
          [&ref](const std::string &v) {
            if (v != "csv" && v != "json")
              throw ConfigError("config: 'format' must be csv or json, got '" + v + "'");
            ref = v;
          }};
}

std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
    return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

// Flat "key = value" (or "key: value") lines; '#' starts a comment.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("config: cannot open '" + path + "'");
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    line = trim(line.substr(0, line.find('#')));
    if (line.empty())
      continue;
    const auto sep = line.find_first_of("=:");
    if (sep == std::string::npos)
      throw ConfigError("config: " + path + ":" + std::to_string(lineno) + ": expected key = value");
    auto key = trim(line.substr(0, sep));
    std::replace(key.begin(), key.end(), '_', '-');
    entries.emplace_back(key, trim(line.substr(sep + 1)));
  }
  return entries;
}

class Command {
public:
  using Body = std::function<int(const Config &, const Common &, std::ostream &)>;

  Command(CLI::App &app, const std::string &name, const std::string &help, Config defaults,
          std::vector<std::string> knobs, Body body)
      : cfg_(defaults), body_(std::move(body)) {
    sub_ = app.add_subcommand(name, help);
    std::map<std::string, Field> all{
        {"n", number_field("n", cfg_.n)},         {"d", number_field("d", cfg_.d)},
        {"s", number_field("s", cfg_.s)},         {"r", number_field("r", cfg_.r)},
        {"k", number_field("k", cfg_.k)},         {"q", number_field("q", cfg_.q)},
        {"c", number_field("c", cfg_.c)},         {"z", number_field("z", cfg_.z)},
        {"t", number_field("t", cfg_.t)},         {"w", number_field("w", cfg_.w)},
        {"samples", number_field("samples", cfg_.samples)},
        {"trials", number_field("trials", cfg_.trials)},
        {"seed", number_field("seed", cfg_.seed)},
        {"threads", number_field("threads", cfg_.threads)},
        {"out", {[this] { return common_.out; }, [this](const std::string &v) { common_.out = v; }}},
        {"format", format_field(common_.format)},
    };
    knobs.insert(knobs.end(), {"seed", "trials", "out", "format"});
    for (const auto &k : knobs)
      fields_.emplace(k, all.at(k));

    for (const auto &k : knobs) {
      if (k == "out")
        sub_->add_option("--out", common_.out, "Output path, - for stdout")->capture_default_str();
      else if (k == "format")
        sub_->add_option("--format", common_.format, "Output format")
            ->check(CLI::IsMember({"csv", "json"}))
            ->capture_default_str();
      else
        add_number_option(k);
    }
    sub_->add_option("--config", common_.config, "Flat key = value file; its values win over flags");
  }

  bool parsed() const { return sub_->parsed(); }

  int run() {
    if (!common_.config.empty())
      apply_config_file();
    if (cfg_.threads < 1)
      throw ConfigError("constraint violated: threads >= 1");
    if (common_.out == "-")
      return body_(cfg_, common_, std::cout);
    std::ofstream out(common_.out, std::ios::binary);
    if (!out)
      throw ConfigError("cannot open output file '" + common_.out + "'");
    return body_(cfg_, common_, out);
  }

private:
  void add_number_option(const std::string &k) {
    auto bind = [&](auto &ref) { sub_->add_option("--" + k, ref)->capture_default_str(); };
    if (k == "q")
      bind(cfg_.q);
    else if (k == "trials")
      bind(cfg_.trials);
    else if (k == "samples")
      bind(cfg_.samples);
    else if (k == "seed")
      bind(cfg_.seed);
    else if (k == "n")
      bind(cfg_.n);
    else if (k == "d")
      bind(cfg_.d);
    else if (k == "s")
      bind(cfg_.s);
    else if (k == "r")
      bind(cfg_.r);
    else if (k == "k")
      bind(cfg_.k);
    else if (k == "c")
      bind(cfg_.c);
    else if (k == "z")
      bind(cfg_.z);
    else if (k == "t")
      bind(cfg_.t);
    else if (k == "w")
      bind(cfg_.w);
    else if (k == "threads")
      bind(cfg_.threads);
  }

  void apply_config_file() {
    for (const auto &[key, value] : read_config_file(common_.config)) {
      auto it = fields_.find(key);
      if (it == fields_.end())
        throw ConfigError("config: unknown key '" + key + "' for " + sub_->get_name());
      const std::string before = it->second.get();
      it->second.set(value);
      const std::string after = it->second.get();
      if (sub_->count("--" + key) > 0 && before != after)
        std::cerr << "note: config file sets " << key << " = " << after << ", overriding --" << key << " " << before
                  << "\n";
    }
  }

  Config cfg_;
  Common common_;
  Body body_;
  CLI::App *sub_ = nullptr;
  std::map<std::string, Field> fields_;
};

// ---------------------------------------------------------------------------
// Output helpers

json row_json(const ExperimentRow &row) {
  const auto &g = row.result;
  return json{{"experiment", row.experiment}, {"n", row.n},
              {"d", row.d},                   {"s", row.s},
              {"r", row.r},                   {"k", row.k},
              {"q", row.q},                   {"z", row.z},
              {"trials", g.trials},           {"p_real", g.p_real},
              {"p_ideal", g.p_ideal},         {"advantage", g.advantage},
              {"stderr", g.stderr_},          {"seed", g.seed},
              {"violations", g.violations}};
}

void write_rows(std::ostream &out, const Common &common, const std::vector<ExperimentRow> &rows) {
  if (common.format == "json") {
    json arr = json::array();
    for (const auto &r : rows)
      arr.push_back(row_json(r));
    out << arr.dump(2) << "\n";
    return;
  }
  out << csv_header() << "\n";
  for (const auto &r : rows)
    out << to_csv_row(r) << "\n";
}

// Plain table of (name, value) columns for the non-game subcommands.
void write_records(std::ostream &out, const Common &common, const std::vector<json> &records) {
  if (common.format == "json") {
    out << json(records).dump(2) << "\n";
    return;
  }
  if (records.empty())
    return;
  bool first = true;
  for (const auto &[k, v] : records.front().items()) {
    out << (first ? "" : ",") << k;
    first = false;
  }
  out << "\n";
  for (const auto &rec : records) {
    first = true;
    for (const auto &[k, v] : rec.items()) {
      out << (first ? "" : ",");
      if (v.is_string())
        out << v.get<std::string>();
      else if (v.is_number_float())
        out << format_double(v.get<double>());
      else
        out << v.dump();
      first = false;
    }
    out << "\n";
  }
}

bool clean(const std::vector<ExperimentRow> &rows) {
  for (const auto &r : rows)
    if (r.result.violations != 0) {
      std::cerr << "FAIL: " << r.experiment << " recorded " << r.result.violations << " violations\n";
      return false;
    }
  return true;
}

int verdict(bool ok) { return ok ? kExitPass : kExitFail; }

// ---------------------------------------------------------------------------
// Subcommands

int cmd_kwise_verify(const Config &cfg, const Common &common, std::ostream &out) {
  std::vector<json> records;
  std::vector<unsigned> ks;
  if (cfg.k == 0)
    ks = {2, 3};
  else
    ks = {cfg.k};
  // Validate every request before enumerating any of them.
  for (auto k : ks)
    if (cfg.w != 4 || (k != 2 && k != 3))
      experiments::kwise_verify(cfg.w, k);
  bool ok = true;
  for (auto k : ks) {
    const auto rep = experiments::kwise_verify(cfg.w, k);
    ok = ok && rep.pass();
    records.push_back(json{{"w", rep.w},
                           {"k", rep.k},
                           {"keys", rep.keys},
                           {"input_tuples", rep.input_tuples},
                           {"expected_count", rep.expected_count},
                           {"unequal_tuples", rep.unequal_tuples},
                           {"pass", rep.pass()}});
  }
  write_records(out, common, records);
  return verdict(ok);
}

int cmd_birthday(const Config &cfg, const Common &common, std::ostream &out) {
  const auto rows = experiments::birthday(cfg);
  write_rows(out, common, rows);
  return verdict(clean(rows));
}

int cmd_uniformity(const Config &cfg, const Common &common, std::ostream &out) {
  const auto rep = experiments::uniformity(cfg);
  write_records(out, common,
                {json{{"experiment", "uniformity/pp"},
                      {"d", rep.d},
                      {"s", rep.s},
                      {"r", rep.r},
                      {"k", rep.k},
                      {"t", rep.t},
                      {"samples", rep.samples},
                      {"seed", rep.seed},
                      {"sd_estimate", rep.estimate.sd_estimate},
                      {"baseline_sd", rep.estimate.baseline_sd},
                      {"margin", rep.margin},
                      {"pass", rep.pass()}}});
  if (!rep.pass())
    std::cerr << "FAIL: sd estimate " << rep.estimate.sd_estimate << " exceeds baseline " << rep.estimate.baseline_sd
              << " + " << rep.margin << "\n";
  return verdict(rep.pass());
}

int cmd_ggm_kat(const Config &, const Common &common, std::ostream &out) {
  std::vector<json> records;
  bool ok = true;
  for (const auto &v : experiments::ggm_kat()) {
    ok = ok && v.pass();
    records.push_back(json{{"name", v.name},
                           {"root", v.root},
                           {"input", v.input},
                           {"expected", v.expected},
                           {"actual", v.actual},
                           {"pass", v.pass()}});
  }
  write_records(out, common, records);
  return verdict(ok);
}

int cmd_involution(const Config &cfg, const Common &common, std::ostream &out) {
  const auto rep = experiments::involution(cfg);
  const std::vector<ExperimentRow> rows{rep.adaptive, rep.non_adaptive};
  write_rows(out, common, rows);
  if (!rep.pass())
    std::cerr << "FAIL: a fixed-point-free oracle answered inconsistently with an involution\n";
  return verdict(rep.pass() && clean(rows));
}

int cmd_adaptive_transform(const Config &cfg, const Common &common, std::ostream &out) {
  const auto rep = experiments::adaptive_transform(cfg);
  write_rows(out, common, {rep.row});
  std::cerr << "underlying queries: " << rep.underlying_queries << ", outside [4q]: " << rep.outside_queries << "\n";
  return verdict(rep.pass());
}

int cmd_adw_compare(const Config &cfg, const Common &common, std::ostream &out) {
  const auto rows = experiments::adw_compare(cfg);
  std::vector<ExperimentRow> games;
  bool ok = true;
  for (const auto &row : rows) {
    games.push_back(row.game);
    const bool table = row.game.experiment.ends_with("table");
    const std::uint64_t expected = row.game.z == 0 || table ? 2 : 3ull * row.game.z + 2;
    if (row.f_calls_per_query != expected) {
      std::cerr << "FAIL: " << row.game.experiment << " made " << row.f_calls_per_query << " PRF calls, expected "
                << expected << "\n";
      ok = false;
    }
  }
  if (common.format == "json") {
    json arr = json::array();
    for (const auto &row : rows) {
      json j = row_json(row.game);
      j["f_calls_per_query"] = row.f_calls_per_query;
      j["hash_key_bits"] = row.key.hash_bits;
      j["table_bits"] = row.key.table_bits;
      j["prf_instances"] = row.key.prf_instances;
      arr.push_back(std::move(j));
    }
    out << arr.dump(2) << "\n";
  } else {
    write_rows(out, common, games);
  }
  for (const auto &row : rows)
    std::cerr << row.game.experiment << ": f calls/query " << row.f_calls_per_query << ", hash key bits "
              << row.key.hash_bits << ", table bits " << row.key.table_bits << ", prf instances "
              << row.key.prf_instances << "\n";
  return verdict(ok && clean(games));
}

Config with(Config c, const std::function<void(Config &)> &edit) {
  edit(c);
  return c;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Cuckoo-hashing PRF domain extension experiments"};
  app.require_subcommand(1);

  const Config base;
  std::vector<std::unique_ptr<Command>> commands;
  auto add = [&](auto &&...args) { commands.push_back(std::make_unique<Command>(app, args...)); };

  add("kwise-verify", "Enumerate all keys over GF(16) and check exact k-wise independence (k=0 runs k=2 and k=3)",
      with(base, [](Config &c) { c.k = 0; }), std::vector<std::string>{"w", "k"}, cmd_kwise_verify);
  add("birthday", "Birthday attack against levin, pp and adw at identical (d, s, r, q)", base,
      std::vector<std::string>{"d", "s", "r", "k", "q", "c", "threads"}, cmd_birthday);
  add("uniformity", "Statistical distance of pp output tuples from uniform",
      with(base, [](Config &c) {
        c.d = 8;
        c.s = 6;
        c.r = 2;
        c.k = 8;
        c.t = 4;
      }),
      std::vector<std::string>{"d", "s", "r", "k", "t", "samples"}, cmd_uniformity);
  add("ggm-kat", "GGM known-answer vectors over the complement stub generator", base, std::vector<std::string>{},
      cmd_ggm_kat);
  add("involution", "Adaptive versus non-adaptive distinguishing of random involutions",
      with(base, [](Config &c) {
        c.n = 10;
        c.trials = 1000;
      }),
      std::vector<std::string>{"n", "threads"}, cmd_involution);
  add("adaptive-transform", "Adaptive prober against the non-adaptive to adaptive transform",
      with(base, [](Config &c) {
        c.n = 16;
        c.q = 64;
        c.k = 16;
        c.trials = 200;
      }),
      std::vector<std::string>{"n", "q", "k"}, cmd_adaptive_transform);
  add("adw-compare", "PP against prf-backed and table-backed ADW: calls, key size, birthday game",
      with(base, [](Config &c) { c.trials = 500; }),
      std::vector<std::string>{"d", "s", "r", "k", "q", "c", "threads"}, cmd_adw_compare);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitConfig;
  }

  try {
    for (auto &cmd : commands)
      if (cmd->parsed())
        return cmd->run();
  } catch (const ConfigError &e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const UsageError &e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitConfig;
}
