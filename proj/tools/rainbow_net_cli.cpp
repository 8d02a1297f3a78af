// rainbow-net: command line front end for routing, profile optimization,
// the PET codec and the reproduction tables.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rainbow_net/distortion.hpp"
#include "rainbow_net/errors.hpp"
#include "rainbow_net/experiments.hpp"
#include "rainbow_net/network.hpp"
#include "rainbow_net/pet_codec.hpp"
#include "rainbow_net/progressive_source.hpp"
#include "rainbow_net/rainbow_flow.hpp"
#include "rainbow_net/routing_search.hpp"

namespace {

using json = nlohmann::json;
using namespace rnf;

enum ExitCode { kOk = 0, kInvalid = 1, kUsage = 2, kInternal = 3 };

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

/// Everything a command prints; rendered as CSV or as one JSON document.
struct Report {
    std::vector<Table> tables;
    json extra = json::object();
    std::string trailing_text;  // CSV mode only, e.g. a flow document

    std::string render(bool as_json) const {
        std::ostringstream os;
        os.imbue(std::locale::classic());
        if (as_json) {
            json doc = extra;
            doc["tables"] = json::array();
            for (const Table& t : tables) doc["tables"].push_back({{"columns", t.columns}, {"rows", t.rows}});
            os << doc.dump(2) << "\n";
            return os.str();
        }
        for (std::size_t i = 0; i < tables.size(); ++i) {
            if (i) os << "\n";
            auto line = [&](const std::vector<std::string>& cells) {
                for (std::size_t c = 0; c < cells.size(); ++c) os << (c ? "," : "") << cells[c];
                os << "\n";
            };
            line(tables[i].columns);
            for (const auto& row : tables[i].rows) line(row);
        }
        if (!trailing_text.empty()) os << "\n" << trailing_text << "\n";
        return os.str();
    }
};

struct Globals {
    std::string scenario;
    std::uint64_t seed = 0;
    bool json = false;
    bool strict = false;
    std::string manifest;
};

std::shared_ptr<const Network> scenario_or_fail(const std::string& local, const Globals& g) {
    const std::string& path = local.empty() ? g.scenario : local;
    if (path.empty()) throw UsageError("a scenario file is required (positional or --scenario)");
    return std::make_shared<const Network>(load_scenario_file(path));
}

std::vector<double> parse_csv_doubles(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    ss.imbue(std::locale::classic());
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(Rational::parse(cell).to_double());
    return out;
}

std::vector<Rational> parse_csv_rationals(const std::string& text) {
    std::vector<Rational> out;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(Rational::parse(cell));
    return out;
}

WeightVector parse_weights(const std::string& spec, const Network& net) {
    if (spec.empty() || spec == "uniform") return WeightVector::uniform(net.sinks().size());
    if (spec == "maxflow") return max_flow_weights(net);
    auto raw = parse_csv_doubles(spec);
    if (raw.size() != net.sinks().size())
        throw UsageError("--weights needs " + std::to_string(net.sinks().size()) + " values");
    return WeightVector::normalized(std::move(raw));
}

Table rfv_table(const Network& net, const RainbowFlowVector& q) {
    Table t{{"sink", "q"}, {}};
    for (std::size_t i = 0; i < net.sinks().size(); ++i) t.rows.push_back({net.node_name(net.sinks()[i]), q.q[i].to_string()});
    return t;
}

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << bytes;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rainbow network flow routing of balanced multiple-description codes"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--scenario", g.scenario, "Scenario document (JSON)");
    app.add_option("--seed", g.seed, "Seed for stochastic sources")->default_val(0);
    app.add_flag("--json", g.json, "Emit JSON instead of CSV");
    app.add_flag("--strict", g.strict, "Require spectrum measure strictly below capacity");
    app.add_option("--manifest", g.manifest, "Write a run manifest (JSON) to this file");
    app.set_version_flag("--version", RAINBOW_NET_VERSION);

    int status = kOk;
    Report report;
    std::vector<std::string> written_files;
    std::string command_name;

    // validate
    auto* validate = app.add_subcommand("validate", "Check a flow against capacities; print slack report and RFV");
    std::vector<std::string> v_files;
    validate->add_option("files", v_files, "[scenario] flow")->required()->expected(1, 2);
    validate->callback([&] {
        command_name = "validate";
        const std::string v_scenario = v_files.size() == 2 ? v_files[0] : std::string();
        const std::string& v_flow = v_files.back();
        auto net = scenario_or_fail(v_scenario, g);
        const CapacityRule rule = g.strict ? CapacityRule::strict : CapacityRule::non_strict;
        const AnyRnf flow = load_flow_file(net, v_flow);
        std::visit(
            [&](const auto& f) {
                const AdmissibilityReport adm = check_admissible(f, rule);
                Table slack{{"edge", "tail", "head", "measure", "capacity", "slack", "within_capacity"}, {}};
                for (const EdgeLoad& e : adm.edges) {
                    const Edge& edge = net->edge(e.edge);
                    slack.rows.push_back({edge.id, net->node_name(edge.tail), net->node_name(edge.head),
                                          e.measure.to_string(), e.capacity.to_string(), e.slack().to_string(),
                                          e.within_capacity ? "1" : "0"});
                    if (!e.within_capacity)
                        std::cerr << "inadmissible: edge " << edge.id << " carries " << e.measure << ", capacity "
                                  << e.capacity << "\n";
                }
                report.tables.push_back(std::move(slack));
                report.tables.push_back(rfv_table(*net, rainbow_flow_vector(f)));
                report.extra["admissible"] = adm.admissible;
                report.extra["total_rainbow_flow"] = total_rainbow_flow(f).to_string();
                if (!adm.admissible) status = kInvalid;
            },
            flow);
    });

    // search
    auto* search_cmd = app.add_subcommand("search", "Search an admissible discrete flow");
    std::string s_scenario, s_mode = "exact", s_objective = "trf", s_weights, s_y, s_rate = "1", s_out;
    int s_k = 2;
    std::size_t s_len = 4;
    search_cmd->add_option("scenario", s_scenario, "Scenario document");
    search_cmd->add_option("--K", s_k, "Number of descriptions")->default_val(2);
    search_cmd->add_option("--rate", s_rate, "Description rate (decimal or fraction)")->default_val("1");
    search_cmd->add_option("--mode", s_mode, "exact | greedy")->check(CLI::IsMember({"exact", "greedy"}));
    search_cmd->add_option("--objective", s_objective, "trf | wd")->check(CLI::IsMember({"trf", "wd"}));
    search_cmd->add_option("--weights", s_weights, "Sink weights: csv, 'uniform' or 'maxflow'");
    search_cmd->add_option("--y", s_y, "PET profile for the wd objective (csv, default uniform)");
    search_cmd->add_option("--max-len", s_len, "Longest path considered")->default_val(4);
    search_cmd->add_option("--out", s_out, "Write the flow document here instead of stdout");
    search_cmd->callback([&] {
        command_name = "search";
        auto net = scenario_or_fail(s_scenario, g);
        SearchConfig cfg;
        cfg.color_count = s_k;
        cfg.rate = Rational::parse(s_rate);
        cfg.max_path_len = s_len;
        cfg.mode = s_mode == "greedy" ? SearchMode::greedy : SearchMode::exact;
        cfg.rule = g.strict ? CapacityRule::strict : CapacityRule::non_strict;
        if (s_objective == "wd") {
            cfg.objective = SearchObjective::weighted_distortion;
            cfg.weights = parse_weights(s_weights, *net);
            cfg.profile = s_y.empty() ? std::vector<double>(static_cast<std::size_t>(s_k), 1.0 / s_k) : parse_csv_doubles(s_y);
        }
        const SearchResult res = search(net, cfg);
        const RainbowFlowVector q = rainbow_flow_vector(res.flow);
        Table summary{{"objective", "K", "rate"}, {{num(res.objective), std::to_string(s_k), cfg.rate.to_string()}}};
        for (std::size_t i = 0; i < q.q.size(); ++i) {
            summary.columns.push_back("q_" + std::to_string(i + 1));
            summary.rows[0].push_back(q.q[i].to_string());
        }
        report.tables.push_back(std::move(summary));
        const std::string doc = dump_flow(res.flow);
        report.extra["flow"] = json::parse(doc);
        if (!s_out.empty()) {
            write_file(s_out, doc + "\n");
            written_files.push_back(s_out);
        } else {
            report.trailing_text = doc;
        }
    });

    // optimize
    auto* optimize = app.add_subcommand("optimize", "Fit the PET profile y to a flow and sink weights");
    std::string o_scenario, o_flow, o_weights, o_rate;
    int o_k = 0;
    optimize->add_option("scenario", o_scenario, "Scenario document");
    optimize->add_option("--flow", o_flow, "Discrete flow document")->required();
    optimize->add_option("--weights", o_weights, "Sink weights: csv, 'uniform' or 'maxflow'");
    optimize->add_option("--K", o_k, "Number of descriptions (default: from the flow)");
    optimize->add_option("--rate", o_rate, "Description rate (default: from the flow)");
    optimize->callback([&] {
        command_name = "optimize";
        auto net = scenario_or_fail(o_scenario, g);
        const AnyRnf any = load_flow_file(net, o_flow);
        const auto* flow = std::get_if<DiscreteRnf>(&any);
        if (!flow) throw UsageError("optimize needs a discrete flow");
        const int k = o_k > 0 ? o_k : flow->color_count();
        const Rational rate = o_rate.empty() ? flow->rate() : Rational::parse(o_rate);
        const WeightVector p = parse_weights(o_weights, *net);
        const RainbowFlowVector q = rainbow_flow_vector(*flow);
        const PetOptimum opt = optimize_pet_profile(q, p, k, rate, DistortionModel::gaussian());
        const auto counts = descriptions_from_rfv(q, rate, k);
        const DistortionVector d = eval_drnf_distortion(counts, opt.y, rate.to_double(), DistortionModel::gaussian());
        Table sinks{{"sink", "q", "d"}, {}};
        for (std::size_t t = 0; t < q.q.size(); ++t)
            sinks.rows.push_back({net->node_name(net->sinks()[t]), q.q[t].to_string(), num(d.d[t])});
        Table profile{{"objective"}, {{num(opt.objective)}}};
        for (int i = 0; i < k; ++i) {
            profile.columns.push_back("y_" + std::to_string(i + 1));
            profile.rows[0].push_back(num(opt.y[static_cast<std::size_t>(i)]));
        }
        report.tables.push_back(std::move(sinks));
        report.tables.push_back(std::move(profile));
    });

    // pet encode | decode
    auto* pet = app.add_subcommand("pet", "PET multiple-description codec");
    pet->require_subcommand(1);
    auto* encode = pet->add_subcommand("encode", "Split a stream into K description files");
    std::string e_input, e_y, e_rate = "1", e_dir = ".";
    std::int64_t e_n = 8192;
    encode->add_option("--input", e_input, "Source stream file (default: seeded Gaussian bit-plane stream)");
    encode->add_option("--y", e_y, "Profile y_1..y_K (csv)")->required();
    encode->add_option("--rate", e_rate, "Description rate (bits per symbol)")->default_val("1");
    encode->add_option("--n", e_n, "Block length in source symbols")->default_val(8192);
    encode->add_option("--out-dir", e_dir, "Directory for desc_<i>.rnf")->default_val(".");
    encode->callback([&] {
        command_name = "pet encode";
        const auto y = parse_csv_rationals(e_y);
        const Rational rate = Rational::parse(e_rate);
        const PetProfile profile = PetProfile::quantize(std::span<const Rational>(y), rate, e_n);
        std::vector<std::uint8_t> stream;
        if (e_input.empty()) {
            const double max_rate = (Rational(profile.description_count()) * rate).to_double();
            stream = progressive_gaussian_source(g.seed, static_cast<std::size_t>(e_n), max_rate).bitstream;
        } else {
            const std::string raw = read_file(e_input);
            stream.assign(raw.begin(), raw.end());
        }
        const auto descriptions = pet_encode(stream, profile);
        std::filesystem::create_directories(e_dir);
        Table files{{"index", "file", "bytes"}, {}};
        for (const Description& d : descriptions) {
            const auto bytes = serialize_description(d);
            const std::string path = (std::filesystem::path(e_dir) / ("desc_" + std::to_string(d.index) + ".rnf")).string();
            write_file(path, std::string(bytes.begin(), bytes.end()));
            written_files.push_back(path);
            files.rows.push_back({std::to_string(d.index), path, std::to_string(bytes.size())});
        }
        Table prof{{"K", "n", "rate"}, {{std::to_string(profile.description_count()), std::to_string(e_n), rate.to_string()}}};
        const auto yq = profile.y();
        for (std::size_t i = 0; i < yq.size(); ++i) {
            prof.columns.push_back("y_" + std::to_string(i + 1));
            prof.rows[0].push_back(yq[i].to_string());
        }
        for (int l = 0; l <= profile.description_count(); ++l) {
            prof.columns.push_back("xi_" + std::to_string(l));
            prof.rows[0].push_back(std::to_string(profile.recoverable_bits(l)));
        }
        report.tables.push_back(std::move(files));
        report.tables.push_back(std::move(prof));
    });
    auto* decode = pet->add_subcommand("decode", "Recover the stream prefix from description files");
    std::vector<std::string> d_files;
    std::string d_out;
    decode->add_option("files", d_files, "Description files")->required();
    decode->add_option("--out", d_out, "Write the recovered prefix here");
    decode->callback([&] {
        command_name = "pet decode";
        std::vector<Description> subset;
        for (const std::string& f : d_files) {
            const std::string raw = read_file(f);
            subset.push_back(parse_description(std::span<const std::uint8_t>(
                reinterpret_cast<const std::uint8_t*>(raw.data()), raw.size())));
        }
        const RecoveredPrefix prefix = pet_decode(subset);
        if (!d_out.empty()) {
            write_file(d_out, std::string(prefix.bytes.begin(), prefix.bytes.end()));
            written_files.push_back(d_out);
        }
        report.tables.push_back({{"descriptions", "bits", "bytes"},
                                 {{std::to_string(prefix.descriptions), std::to_string(prefix.bits),
                                   std::to_string(prefix.bytes.size())}}});
    });

    // fig1
    auto* fig1 = app.add_subcommand("fig1", "Two-description example: optimized MDC vs separate coding");
    std::string f_rates = "0.25,0.5,1,2,4";
    fig1->add_option("--C", f_rates, "Link capacity C, or a csv grid")->default_val("0.25,0.5,1,2,4");
    fig1->callback([&] {
        command_name = "fig1";
        const auto rates = parse_csv_doubles(f_rates);
        Table t{{"C", "d_S", "d_M_star", "D_star", "D12_star", "strict"}, {}};
        for (const Fig1Row& row : fig1_sweep(rates)) {
            t.rows.push_back({num(row.rate), num(row.separate), num(row.mdc_average), num(row.side), num(row.joint),
                              row.strictly_better ? "1" : "0"});
            if (row.rate > 0.0 && !row.strictly_better) status = kInvalid;
        }
        report.tables.push_back(std::move(t));
    });

    // lemmas
    auto* lemmas = app.add_subcommand("lemmas", "Run the description-count / rate-splitting / small-packet properties");
    std::vector<std::string> l_scenarios;
    std::string l_rate = "1";
    int l_k = 2;
    std::size_t l_len = 4;
    int l_steps = 6;
    lemmas->add_option("scenarios", l_scenarios, "Scenario documents");
    lemmas->add_option("--K", l_k, "Number of descriptions")->default_val(2);
    lemmas->add_option("--rate", l_rate, "Description rate")->default_val("1");
    lemmas->add_option("--max-len", l_len, "Longest path considered")->default_val(4);
    lemmas->add_option("--steps", l_steps, "Halvings of the rate in the trend check")->default_val(6);
    lemmas->callback([&] {
        command_name = "lemmas";
        if (l_scenarios.empty()) l_scenarios.push_back(g.scenario);
        LemmaOptions opt;
        opt.color_count = l_k;
        opt.rate = Rational::parse(l_rate);
        opt.max_path_len = l_len;
        opt.trend_steps = l_steps;
        Table t{{"property", "scenario", "result", "detail"}, {}};
        for (const std::string& path : l_scenarios) {
            auto net = scenario_or_fail(path, g);
            const std::string label = std::filesystem::path(path).filename().string();
            for (const PropertyResult& r : run_lemma_suite(net, label, opt)) {
                t.rows.push_back({r.property, r.scenario, r.passed ? "pass" : "fail", r.detail});
                if (!r.passed) status = kInvalid;
            }
        }
        report.tables.push_back(std::move(t));
    });

    // pipeline
    auto* pipeline = app.add_subcommand("pipeline", "Search, fit y, encode a Gaussian block, decode at every sink");
    std::string p_scenario, p_weights, p_rate = "1", p_mode = "exact";
    int p_k = 2;
    std::int64_t p_n = 8192;
    std::size_t p_len = 4;
    pipeline->add_option("scenario", p_scenario, "Scenario document");
    pipeline->add_option("--K", p_k, "Number of descriptions")->default_val(2);
    pipeline->add_option("--rate", p_rate, "Description rate")->default_val("1");
    pipeline->add_option("--weights", p_weights, "Sink weights: csv, 'uniform' or 'maxflow'");
    pipeline->add_option("--n", p_n, "Block length")->default_val(8192);
    pipeline->add_option("--mode", p_mode, "exact | greedy")->check(CLI::IsMember({"exact", "greedy"}));
    pipeline->add_option("--max-len", p_len, "Longest path considered")->default_val(4);
    pipeline->callback([&] {
        command_name = "pipeline";
        auto net = scenario_or_fail(p_scenario, g);
        PipelineOptions opt;
        opt.color_count = p_k;
        opt.rate = Rational::parse(p_rate);
        opt.block_length = p_n;
        opt.seed = g.seed;
        opt.max_path_len = p_len;
        opt.mode = p_mode == "greedy" ? SearchMode::greedy : SearchMode::exact;
        const PipelineResult res = run_pipeline(net, parse_weights(p_weights, *net), opt);
        Table t{{"sink", "q", "analytic_d", "empirical_mse"}, {}};
        for (const PipelineRow& row : res.rows)
            t.rows.push_back({row.sink, row.q.to_string(), num(row.analytic), num(row.empirical)});
        report.tables.push_back(std::move(t));
        report.extra["objective"] = res.objective;
        report.extra["y"] = json::array();
        for (const Rational& y : res.profile.y()) report.extra["y"].push_back(y.to_string());
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInvalid;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInvalid;
    } catch (const DecodeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInvalid;
    } catch (const InstanceTooLarge& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInvalid;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInvalid;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternal;
    }

    const std::string out = report.render(g.json);
    std::cout << out;

    if (!g.manifest.empty()) {
        json manifest;
        manifest["command"] = command_name;
        manifest["scenario"] = g.scenario;
        manifest["arguments"] = std::vector<std::string>(argv + 1, argv + argc);
        manifest["seed"] = g.seed;
        manifest["tool_version"] = RAINBOW_NET_VERSION;
        manifest["outputs"] = {{"stdout", "fnv1a64:" + hex(fnv1a(out))}};
        for (const std::string& f : written_files) manifest["outputs"][f] = "fnv1a64:" + hex(fnv1a(read_file(f)));
        manifest["exit_status"] = status;
        write_file(g.manifest, manifest.dump(2) + "\n");
    }
    return status;
}
