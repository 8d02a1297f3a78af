#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rainbow_net/distortion.hpp"
#include "rainbow_net/errors.hpp"
#include "rainbow_net/experiments.hpp"
#include "rainbow_net/network.hpp"
#include "rainbow_net/pet_codec.hpp"
#include "rainbow_net/progressive_source.hpp"
#include "rainbow_net/rainbow_flow.hpp"
#include "rainbow_net/routing_search.hpp"

namespace py = pybind11;
using namespace rnf;

// Rational <-> fractions.Fraction. Anything Fraction() accepts (int, str,
// float, Fraction) converts in.
namespace pybind11::detail {
template <>
struct type_caster<Rational> {
    PYBIND11_TYPE_CASTER(Rational, const_name("fractions.Fraction"));

    bool load(handle src, bool) {
        if (!src || src.is_none()) return false;
        try {
            const object frac = module_::import("fractions").attr("Fraction")(src);
            value = Rational(frac.attr("numerator").cast<std::int64_t>(), frac.attr("denominator").cast<std::int64_t>());
            return true;
        } catch (const error_already_set&) {
            PyErr_Clear();
            return false;
        } catch (const cast_error&) {
            return false;
        }
    }

    static handle cast(const Rational& r, return_value_policy, handle) {
        return module_::import("fractions").attr("Fraction")(r.num(), r.den()).release();
    }
};
}  // namespace pybind11::detail

namespace {

using NetPtr = std::shared_ptr<Network>;

std::vector<std::vector<std::string>> path_ids(const Network& net, const std::vector<FlowPath>& paths) {
    std::vector<std::vector<std::string>> out;
    for (const FlowPath& p : paths) {
        std::vector<std::string> ids;
        for (EdgeId e : p.edges) ids.push_back(net.edge(e).id);
        out.push_back(std::move(ids));
    }
    return out;
}

WeightVector weights_for(const Network& net, const std::optional<std::vector<double>>& p) {
    return p ? WeightVector::normalized(*p) : WeightVector::uniform(net.sinks().size());
}

py::bytes to_bytes(const std::vector<std::uint8_t>& v) {
    return py::bytes(reinterpret_cast<const char*>(v.data()), v.size());
}

std::vector<std::uint8_t> from_bytes(const py::bytes& b) {
    const std::string s = b;
    return {s.begin(), s.end()};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Rainbow network flow routing of balanced multiple-description codes";
    m.attr("__version__") = RAINBOW_NET_VERSION;

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<DecodeError>(m, "DecodeError", PyExc_ValueError);
    py::register_exception<InstanceTooLarge>(m, "InstanceTooLarge", PyExc_RuntimeError);

    py::class_<Network, NetPtr>(m, "Network")
        .def_property_readonly("nodes", &Network::node_names)
        .def_property_readonly("edges", [](const Network& n) {
            std::vector<std::tuple<std::string, std::string, std::string, Rational>> out;
            for (const Edge& e : n.edges()) out.emplace_back(e.id, n.node_name(e.tail), n.node_name(e.head), e.capacity);
            return out;
        })
        .def_property_readonly("sources", [](const Network& n) {
            std::vector<std::string> out;
            for (NodeId v : n.sources()) out.push_back(n.node_name(v));
            return out;
        })
        .def_property_readonly("sinks", [](const Network& n) {
            std::vector<std::string> out;
            for (NodeId v : n.sinks()) out.push_back(n.node_name(v));
            return out;
        })
        .def("max_flow", [](const Network& n, const std::string& sink) { return max_flow(n, n.node(sink)); })
        .def("enumerate_paths",
             [](const Network& n, std::size_t max_len) { return path_ids(n, enumerate_paths(n, max_len)); },
             py::arg("max_len"))
        .def("dumps", &dump_scenario);

    m.def("load_scenario", [](const std::string& text) { return std::make_shared<Network>(load_scenario(text)); });
    m.def("load_scenario_file",
          [](const std::string& path) { return std::make_shared<Network>(load_scenario_file(path)); });

    py::class_<DiscreteRnf>(m, "DiscreteRnf")
        .def_property_readonly("color_count", &DiscreteRnf::color_count)
        .def_property_readonly("rate", &DiscreteRnf::rate)
        .def_property_readonly("paths", [](const DiscreteRnf& f) {
            std::vector<std::pair<std::vector<std::string>, int>> out;
            for (const ColoredPath& cp : f.paths()) out.emplace_back(path_ids(f.net(), {cp.path})[0], cp.color);
            return out;
        })
        .def("rainbow_flow_vector", [](const DiscreteRnf& f) { return rainbow_flow_vector(f).q; })
        .def("total_rainbow_flow", [](const DiscreteRnf& f) { return total_rainbow_flow(f); })
        .def("is_admissible", [](const DiscreteRnf& f, bool strict) {
            return is_admissible(f, strict ? CapacityRule::strict : CapacityRule::non_strict);
        }, py::arg("strict") = false)
        .def("refine", [](const DiscreteRnf& f, int i) { return refine(f, i); })
        .def("dumps", [](const DiscreteRnf& f) { return dump_flow(f); });

    py::class_<ContinuousRnf>(m, "ContinuousRnf")
        .def("rainbow_flow_vector", [](const ContinuousRnf& f) { return rainbow_flow_vector(f).q; })
        .def("total_rainbow_flow", [](const ContinuousRnf& f) { return total_rainbow_flow(f); })
        .def("is_admissible", [](const ContinuousRnf& f, bool strict) {
            return is_admissible(f, strict ? CapacityRule::strict : CapacityRule::non_strict);
        }, py::arg("strict") = false)
        .def("dumps", [](const ContinuousRnf& f) { return dump_flow(f); });

    m.def("load_flow", [](const NetPtr& net, const std::string& text) -> py::object {
        return std::visit([](auto&& f) { return py::cast(f); }, load_flow(net, text));
    });
    m.def("load_flow_file", [](const NetPtr& net, const std::string& path) -> py::object {
        return std::visit([](auto&& f) { return py::cast(f); }, load_flow_file(net, path));
    });

    m.def("interval_measure", [](const std::vector<std::pair<Rational, Rational>>& pieces) {
        std::vector<Interval> v;
        for (const auto& [lo, hi] : pieces) v.push_back({lo, hi});
        return IntervalSet(std::move(v)).measure();
    }, "Measure of a finite union of [lo, hi) intervals.");

    m.def("search", [](const NetPtr& net, int k, const Rational& rate, const std::string& mode,
                       const std::string& objective, const std::optional<std::vector<double>>& weights,
                       const std::optional<std::vector<double>>& y, std::size_t max_len, bool strict) {
        SearchConfig cfg;
        cfg.color_count = k;
        cfg.rate = rate;
        cfg.max_path_len = max_len;
        if (mode != "exact" && mode != "greedy") throw std::invalid_argument("mode must be 'exact' or 'greedy'");
        cfg.mode = mode == "greedy" ? SearchMode::greedy : SearchMode::exact;
        cfg.rule = strict ? CapacityRule::strict : CapacityRule::non_strict;
        if (objective == "wd") {
            cfg.objective = SearchObjective::weighted_distortion;
            cfg.weights = weights_for(*net, weights);
            cfg.profile = y ? *y : std::vector<double>(static_cast<std::size_t>(k), 1.0 / k);
        } else if (objective != "trf") {
            throw std::invalid_argument("objective must be 'trf' or 'wd'");
        }
        SearchResult r = search(net, cfg);
        return py::make_tuple(r.flow, r.objective);
    }, py::arg("net"), py::arg("K"), py::arg("rate"), py::arg("mode") = "exact", py::arg("objective") = "trf",
       py::arg("weights") = py::none(), py::arg("y") = py::none(), py::arg("max_len") = 4, py::arg("strict") = false);

    m.def("separate_coding_baseline", [](const Network& net) {
        BaselineResult b = separate_coding_baseline(net, DistortionModel::gaussian());
        return py::make_tuple(b.rate, b.distortion.d);
    });

    m.def("optimize_pet_profile", [](const std::vector<Rational>& q, const std::optional<std::vector<double>>& weights,
                                     int k, const Rational& rate) {
        const WeightVector p = weights ? WeightVector::normalized(*weights) : WeightVector::uniform(q.size());
        PetOptimum opt = optimize_pet_profile(RainbowFlowVector{q}, p, k, rate, DistortionModel::gaussian());
        return py::make_tuple(opt.y, opt.objective);
    }, py::arg("q"), py::arg("weights") = py::none(), py::arg("K"), py::arg("rate"));

    m.def("drnf_distortion", [](const std::vector<int>& descriptions, const std::vector<double>& y, double rate) {
        return eval_drnf_distortion(descriptions, y, rate, DistortionModel::gaussian()).d;
    }, "Per-sink distortion of a balanced PET code (unit Gaussian source).");

    m.def("ozarow_joint_bound", &ozarow_joint_bound, py::arg("side"), py::arg("rate"));
    m.def("optimize_fig1_ozarow", [](double c) {
        const OzarowOptimum o = optimize_fig1_ozarow(c);
        return py::dict(py::arg("C") = o.rate, py::arg("d_S") = o.separate, py::arg("D_star") = o.side,
                        py::arg("D12_star") = o.joint, py::arg("d_M_star") = o.average);
    });

    m.def("pet_encode", [](const py::bytes& stream, const std::vector<Rational>& y, const Rational& rate,
                           std::int64_t n) {
        const PetProfile profile = PetProfile::quantize(std::span<const Rational>(y), rate, n);
        std::vector<py::bytes> out;
        for (const Description& d : pet_encode(from_bytes(stream), profile)) out.push_back(to_bytes(serialize_description(d)));
        return out;
    }, py::arg("stream"), py::arg("y"), py::arg("rate"), py::arg("n"),
       "Encode into K serialized description files.");
    m.def("pet_decode", [](const std::vector<py::bytes>& files) {
        std::vector<Description> subset;
        for (const py::bytes& f : files) subset.push_back(parse_description(from_bytes(f)));
        const RecoveredPrefix p = pet_decode(subset);
        return py::make_tuple(to_bytes(p.bytes), p.bits);
    }, "Recover (prefix bytes, bit count) from serialized descriptions.");

    m.def("gaussian_source", [](std::uint64_t seed, std::size_t n, double max_rate) {
        const ProgressiveSource s = progressive_gaussian_source(seed, n, max_rate);
        return py::make_tuple(s.samples, to_bytes(s.bitstream), s.planes);
    });

    m.def("run_lemma_suite", [](const NetPtr& net, const std::string& label, int k, const Rational& rate, int steps) {
        LemmaOptions opt;
        opt.color_count = k;
        opt.rate = rate;
        opt.trend_steps = steps;
        std::vector<std::tuple<std::string, bool, std::string>> out;
        for (const PropertyResult& r : run_lemma_suite(net, label, opt)) out.emplace_back(r.property, r.passed, r.detail);
        return out;
    }, py::arg("net"), py::arg("label") = "", py::arg("K") = 2, py::arg("rate") = Rational(1), py::arg("steps") = 6);

    m.def("run_pipeline", [](const NetPtr& net, const std::optional<std::vector<double>>& weights, int k,
                             const Rational& rate, std::int64_t n, std::uint64_t seed) {
        PipelineOptions opt;
        opt.color_count = k;
        opt.rate = rate;
        opt.block_length = n;
        opt.seed = seed;
        const PipelineResult r = run_pipeline(net, weights_for(*net, weights), opt);
        std::vector<std::tuple<std::string, Rational, double, double>> rows;
        for (const PipelineRow& row : r.rows) rows.emplace_back(row.sink, row.q, row.analytic, row.empirical);
        return rows;
    }, py::arg("net"), py::arg("weights") = py::none(), py::arg("K") = 2, py::arg("rate") = Rational(1),
       py::arg("n") = 8192, py::arg("seed") = 0);
}
