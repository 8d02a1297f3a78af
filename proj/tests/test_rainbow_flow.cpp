#include <doctest.h>

#include <random>

#include "rainbow_net/errors.hpp"
#include "rainbow_net/rainbow_flow.hpp"
#include "support.hpp"

using namespace rnf;
using testsupport::fig1;
using testsupport::fig1_flow;

namespace {

FlowPath path(const Network& net, std::initializer_list<const char*> ids) {
    FlowPath p;
    for (const char* id : ids) p.edges.push_back(net.edge_index(id));
    return p;
}

}  // namespace

TEST_CASE("spectra of the two-description diamond flow") {
    const auto net = fig1();
    const DiscreteRnf flow = fig1_flow(net, 1);
    CHECK(edge_spectrum(flow, net->edge_index("1-2")) == ColorSet{1});
    CHECK(edge_spectrum(flow, net->edge_index("2-4")) == ColorSet{1});
    CHECK(edge_spectrum(flow, net->edge_index("2-5")) == ColorSet{1});
    CHECK(edge_spectrum(flow, net->edge_index("4-5")).empty());
    CHECK(node_spectrum(flow, net->node("4")) == ColorSet{1, 2});
    CHECK(node_spectrum(flow, net->node("5")) == ColorSet{1, 2});
    CHECK(node_spectrum(flow, net->node("2")) == ColorSet{1});
    CHECK(node_spectrum(flow, net->node("3")) == ColorSet{2});
    CHECK(rainbow_flow_vector(flow).q == std::vector<Rational>{1, 1, 2, 2});
    CHECK(total_rainbow_flow(flow) == Rational(6));
    CHECK(descriptions_per_sink(flow) == std::vector<int>{1, 1, 2, 2});
    CHECK(is_admissible(flow));
    CHECK_FALSE(is_admissible(flow, CapacityRule::strict));
}

TEST_CASE("recoloring overloads a shared edge") {
    const auto net = fig1();
    const DiscreteRnf base = fig1_flow(net, 1);
    auto paths = base.paths();
    paths[0].color = 2;
    const DiscreteRnf bad(net, paths, 2, 1);
    CHECK(edge_spectrum(bad, net->edge_index("1-2")) == ColorSet{1, 2});
    const AdmissibilityReport report = check_admissible(bad);
    CHECK_FALSE(report.admissible);
    const EdgeLoad& load = report.edges[net->edge_index("1-2")];
    CHECK(load.measure == Rational(2));
    CHECK_FALSE(load.within_capacity);
    CHECK(load.slack() == Rational(-1));
}

TEST_CASE("empty flow and single path") {
    const auto net = fig1();
    const DiscreteRnf empty(net, {}, 2, 1);
    CHECK(is_admissible(empty));
    CHECK(is_admissible(empty, CapacityRule::strict));
    CHECK(rainbow_flow_vector(empty).q == std::vector<Rational>(4, Rational(0)));
    CHECK(total_rainbow_flow(empty) == Rational(0));
    CHECK(refine(empty, 3).paths().empty());
    const DiscreteRnf one(net, {{path(*net, {"1-2"}), 1}}, 1, Rational(1, 2));
    CHECK(total_rainbow_flow(one) == Rational(1, 2));
}

TEST_CASE("flow constructor validation") {
    const auto net = fig1();
    CHECK_THROWS_AS(DiscreteRnf(net, {{path(*net, {"1-2"}), 3}}, 2, 1), ValidationError);
    CHECK_THROWS_AS(DiscreteRnf(net, {{path(*net, {"1-2"}), 0}}, 2, 1), ValidationError);
    CHECK_THROWS_AS(DiscreteRnf(net, {{path(*net, {"2-4"}), 1}}, 2, 1), ValidationError);
    CHECK_THROWS_AS(DiscreteRnf(net, {}, 2, 0), ValidationError);
}

TEST_CASE("continuous spectra") {
    const auto net = fig1();
    const ContinuousRnf flow(net, {{path(*net, {"1-2", "2-4"}), IntervalSet{{Rational(0), Rational(1)}}},
                                   {path(*net, {"1-2", "2-5"}), IntervalSet{{Rational(1, 2), Rational(2)}}}});
    const IntervalSet on12 = edge_spectrum(flow, net->edge_index("1-2"));
    CHECK(on12 == IntervalSet{{Rational(0), Rational(2)}});
    CHECK(on12.measure() == Rational(2));
    CHECK_FALSE(is_admissible(flow));
    CHECK(rainbow_flow_vector(flow).q == std::vector<Rational>{2, 0, 1, Rational(3, 2)});
}

TEST_CASE("shipped continuous flow") {
    const auto net = testsupport::load("fig2.json");
    const AnyRnf any = load_flow_file(net, testsupport::data_path("fig2_flow.json"));
    const auto* flow = std::get_if<ContinuousRnf>(&any);
    REQUIRE(flow != nullptr);
    CHECK(node_spectrum(*flow, net->node("6")) ==
          IntervalSet{{Rational(1, 2), Rational(2)}, {Rational(3), Rational(4)}});
    CHECK(rainbow_flow_vector(*flow).q == std::vector<Rational>{Rational(5, 2), Rational(1, 2), Rational(1)});
    CHECK(is_admissible(*flow));
}

TEST_CASE("flow document round trip") {
    const auto net = fig1();
    const DiscreteRnf flow = fig1_flow(net, Rational(3, 4));
    const AnyRnf back = load_flow(net, dump_flow(flow));
    REQUIRE(std::holds_alternative<DiscreteRnf>(back));
    const auto& d = std::get<DiscreteRnf>(back);
    CHECK(d.rate() == Rational(3, 4));
    CHECK(d.color_count() == 2);
    CHECK(rainbow_flow_vector(d) == rainbow_flow_vector(flow));
    CHECK_THROWS_AS(load_flow(net, R"({"rate": "1", "K": 2, "paths": [{"edges": ["9-9"], "color": 1}]})"),
                    ValidationError);
    CHECK_THROWS_AS(load_flow(net, R"({"rate": "1", "paths": []})"), ParseError);
}

TEST_CASE("refinement keeps loads and flow vector") {
    const auto net = fig1();
    const DiscreteRnf flow = fig1_flow(net, 1);
    const DiscreteRnf twice = refine(flow, 2);
    CHECK(twice.paths().size() == 8);
    CHECK(twice.color_count() == 4);
    CHECK(twice.rate() == Rational(1, 2));
    CHECK(rainbow_flow_vector(twice) == rainbow_flow_vector(flow));
    CHECK(refine(flow, 1).paths().size() == flow.paths().size());

    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const auto g = testsupport::random_network(rng, 7);
        const DiscreteRnf f = testsupport::random_flow(rng, g, 3, Rational(1, 2));
        const auto before = check_admissible(f);
        for (int i = 1; i <= 4; ++i) {
            const DiscreteRnf r = refine(f, i);
            CHECK(rainbow_flow_vector(r) == rainbow_flow_vector(f));
            const auto after = check_admissible(r);
            CHECK(after.admissible == before.admissible);
            for (EdgeId e = 0; e < g->edge_count(); ++e) CHECK(after.edges[e].measure == before.edges[e].measure);
        }
    }
}

TEST_CASE("spectrum consistency properties") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 100; ++trial) {
        const auto g = testsupport::random_network(rng, 7);
        const DiscreteRnf f = testsupport::random_flow(rng, g, 3, Rational(1, 3));
        for (EdgeId e = 0; e < g->edge_count(); ++e) {
            const ColorSet colors = edge_spectrum(f, e);
            Rational sum = 0;
            for (const ColoredPath& cp : f.paths())
                if (std::find(cp.path.edges.begin(), cp.path.edges.end(), e) != cp.path.edges.end()) sum += f.rate();
            CHECK(spectrum_measure(f, colors) <= sum);
        }
        for (NodeId t : g->sinks()) {
            ColorSet incoming;
            for (EdgeId e : g->in_edges(t))
                for (Color c : edge_spectrum(f, e)) incoming.insert(c);
            ColorSet outgoing_only;
            for (const ColoredPath& cp : f.paths()) {
                const auto nodes = path_nodes(*g, cp.path);
                if (nodes.front() == t) outgoing_only.insert(cp.color);
            }
            ColorSet expect = incoming;
            expect.insert(outgoing_only.begin(), outgoing_only.end());
            CHECK(node_spectrum(f, t) == expect);
        }
    }
}
