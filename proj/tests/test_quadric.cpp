#include <catch2/catch_amalgamated.hpp>

#include "qmw/quadric.hpp"
#include "qmw/transversality.hpp"

using namespace qmw;

namespace {

FeynmanGraph sunset12(long d = 2) { return sunset_graph({Rat(1), Rat(2), Rat(3)}, d); }

QuadricNet restricted_sunset(long d = 2) {
    FeynmanGraph g = sunset12(d);
    return restrict_to_subspace(g, momentum_relations(g, first_tree(g)));
}

std::vector<Rat> diag_of(const QuadraticForm& f) {
    std::vector<Rat> d;
    for (std::size_t i = 0; i < f.size(); ++i) d.push_back(f.a(i, i));
    return d;
}

bool is_diagonal(const QuadraticForm& f) {
    for (std::size_t i = 0; i < f.size(); ++i)
        for (std::size_t j = 0; j < f.size(); ++j)
            if (i != j && f.a(i, j) != 0) return false;
    return true;
}

} // namespace

TEST_CASE("raw forms: diagonal with mass squared and the edge's momentum block") {
    FeynmanGraph g = sunset12();
    auto rel = momentum_relations(g, first_tree(g));
    auto raw = build_raw_forms(g, rel);
    REQUIRE(raw.size() == 3);
    for (const auto& f : raw) {
        CHECK(f.size() == 7); // nD+1 = 3*2+1
        CHECK(is_diagonal(f));
    }
    CHECK(diag_of(raw[0]) == std::vector<Rat>{1, 1, 1, 0, 0, 0, 0});
    CHECK(diag_of(raw[1]) == std::vector<Rat>{4, 0, 0, 1, 1, 0, 0});
    CHECK(diag_of(raw[2]) == std::vector<Rat>{9, 0, 0, 0, 0, 1, 1});

    // D=1 single propagator block
    FeynmanGraph g1 = sunset12(1);
    auto raw1 = build_raw_forms(g1, momentum_relations(g1, first_tree(g1)));
    CHECK(diag_of(raw1[0]) == std::vector<Rat>{1, 1, 0, 0});
}

TEST_CASE("restriction to the loop subspace: sunset matrices") {
    QuadricNet net = restricted_sunset();
    REQUIRE(net.form_count() == 3);
    CHECK(net.ambient_dim() == 4);
    CHECK(diag_of(net.forms[0]) == std::vector<Rat>{1, 1, 1, 0, 0});
    CHECK(diag_of(net.forms[1]) == std::vector<Rat>{4, 0, 0, 1, 1});
    CHECK(diag_of(net.forms[2]) == std::vector<Rat>{9, 1, 1, 1, 1});
    // witness diagonals carry the circulation signs
    CHECK(net.witnesses[2].tbar_at(Rat(0)) == std::vector<Rat>{-1, -1, -1, -1});
}

TEST_CASE("restriction: two parallel edges at D = 1") {
    FeynmanGraph g;
    g.name = "bubble";
    g.dimension = 1;
    g.vertices = {"a", "b"};
    g.internal_edges = {{"e1", "a", "b", Rat(1)}, {"e2", "a", "b", Rat(2)}};
    validate_graph(g);
    QuadricNet net = restrict_to_subspace(g, momentum_relations(g, first_tree(g)));
    CHECK(diag_of(net.forms[0]) == std::vector<Rat>{1, 1});
    CHECK(diag_of(net.forms[1]) == std::vector<Rat>{4, 1});
}

TEST_CASE("restriction: tree graph has no loop space") {
    FeynmanGraph g;
    g.name = "tree";
    g.dimension = 2;
    g.vertices = {"a", "b"};
    g.internal_edges = {{"e1", "a", "b", Rat(1)}};
    validate_graph(g);
    auto rel = momentum_relations(g, first_tree(g));
    CHECK_THROWS_MATCHES(restrict_to_subspace(g, rel), Error,
                         Catch::Matchers::Predicate<Error>(
                             [](const Error& e) { return e.code() == errc::empty_loop_space; }));
}

TEST_CASE("paper deformation reproduces the explicit sunset matrices symbol for symbol") {
    FeynmanGraph g = sunset12();
    SpanningTree tree = first_tree(g);
    QuadricNet base = restrict_to_subspace(g, momentum_relations(g, tree));
    QuadricNet net = deform_net(base, tree, Rat(1, 2), DeformationSchedule::paper);

    // Symbolic check on the witness polynomials: block entries are
    // (1, ..., 1, e, ..., e^D) for q1, (e, ..., e^D, 1, ..., 1) for q2 and
    // -(1 + e^r) throughout for q3, so the forms are their squares.
    Poly e1 = Poly::variable(1), e2 = Poly::variable(2);
    CHECK(net.witnesses[0].tbar == std::vector<Poly>{Poly(1), Poly(1), e1, e2});
    CHECK(net.witnesses[1].tbar == std::vector<Poly>{e1, e2, Poly(1), Poly(1)});
    CHECK(net.witnesses[2].tbar ==
          std::vector<Poly>{-(Poly(1) + e1), -(Poly(1) + e2), -(Poly(1) + e1), -(Poly(1) + e2)});

    // Evaluated matrices at eps = 1/2.
    CHECK(diag_of(net.forms[0]) == std::vector<Rat>{1, 1, 1, Rat(1, 4), Rat(1, 16)});
    CHECK(diag_of(net.forms[1]) == std::vector<Rat>{4, Rat(1, 4), Rat(1, 16), 1, 1});
    CHECK(diag_of(net.forms[2]) ==
          std::vector<Rat>{9, Rat(9, 4), Rat(25, 16), Rat(9, 4), Rat(25, 16)});
}

TEST_CASE("deformation at eps = 0 is the identity") {
    FeynmanGraph g = sunset12();
    SpanningTree tree = first_tree(g);
    QuadricNet base = restrict_to_subspace(g, momentum_relations(g, tree));
    QuadricNet same = deform_net(base, tree, Rat(0), DeformationSchedule::paper);
    REQUIRE(same.form_count() == base.form_count());
    for (std::size_t i = 0; i < base.form_count(); ++i) CHECK(same.forms[i].a == base.forms[i].a);
}

TEST_CASE("the eps -> 0 limit of the deformed family is the undeformed net") {
    FeynmanGraph g = sunset12();
    SpanningTree tree = first_tree(g);
    QuadricNet base = restrict_to_subspace(g, momentum_relations(g, tree));
    for (auto schedule : {DeformationSchedule::paper, DeformationSchedule::uniform}) {
        QuadricNet net = deform_net(base, tree, Rat(1, 3), schedule);
        QuadricNet limit = evaluate_at(net, Rat(0));
        for (std::size_t i = 0; i < base.form_count(); ++i) CHECK(limit.forms[i].a == base.forms[i].a);
        // symbolic substitution of 0 into every witness entry
        for (std::size_t i = 0; i < base.form_count(); ++i)
            for (std::size_t s = 0; s < net.witnesses[i].tbar.size(); ++s)
                CHECK(net.witnesses[i].tbar[s].at_zero() == base.witnesses[i].tbar[s].at_zero());
    }
}

TEST_CASE("two parallel edges: off-tree form unchanged, tree form forced") {
    FeynmanGraph g;
    g.name = "bubble";
    g.dimension = 1;
    g.vertices = {"a", "b"};
    g.internal_edges = {{"e1", "a", "b", Rat(1)}, {"e2", "a", "b", Rat(2)}};
    validate_graph(g);
    SpanningTree tree = first_tree(g);
    QuadricNet base = restrict_to_subspace(g, momentum_relations(g, tree));
    QuadricNet net = deform_net(base, tree, Rat(1, 2), DeformationSchedule::paper);
    CHECK(net.forms[0].a == base.forms[0].a); // q1 already full rank, no missing slots
    // conservation at "a": Tbar_1 + Tbar_2 = 0
    CHECK(net.witnesses[1].tbar == std::vector<Poly>{Poly(-1)});
    CHECK(net.forms[1].a == base.forms[1].a);
}

TEST_CASE("verify_conditions on the deformed sunset") {
    FeynmanGraph g = sunset12();
    SpanningTree tree = first_tree(g);
    QuadricNet base = restrict_to_subspace(g, momentum_relations(g, tree));
    QuadricNet net = deform_net(base, tree, Rat(1, 2), DeformationSchedule::paper);
    ConditionReport rep = verify_conditions(net);
    CHECK(rep.smooth);
    CHECK(rep.real);
    CHECK(rep.positive_definite);
    CHECK(rep.conservation);
    CHECK(rep.all());
    REQUIRE(rep.determinants.size() == 3);
    CHECK(rep.determinants[0] == Rat(1, 64));       // 1 * 1 * 1 * 1/4 * 1/16
    CHECK(rep.determinants[2] == Rat(9 * 81 * 625, 16 * 256)); // 9 * (9/4)^2 * (25/16)^2
}

TEST_CASE("verify_conditions flags the singular undeformed net") {
    QuadricNet net = restricted_sunset();
    ConditionReport rep = verify_conditions(net);
    CHECK_FALSE(rep.smooth);
    CHECK(rep.first_singular_form == "e1");
    CHECK_FALSE(rep.positive_definite);
    CHECK(rep.conservation); // the undeformed witnesses conserve exactly
    CHECK(rep.determinants[0] == 0);
    CHECK(rep.determinants[2] == 9); // q3 is already nonsingular
}

TEST_CASE("a broken schedule is caught by the conservation check") {
    FeynmanGraph g = sunset12();
    SpanningTree tree = first_tree(g);
    QuadricNet base = restrict_to_subspace(g, momentum_relations(g, tree));
    QuadricNet net = deform_net(base, tree, Rat(1, 2), DeformationSchedule::paper);
    // perturb one lambda on e1's block-2 slots only
    net.witnesses[0].tbar[2] = Poly::variable(3);
    net = evaluate_at(net, Rat(1, 2));
    ConditionReport rep = verify_conditions(net);
    CHECK_FALSE(rep.conservation);
    CHECK(rep.failing_vertex == "v1");
}

TEST_CASE("conservation holds on every corpus graph after deformation") {
    // a couple of topologies beyond the sunset
    struct Case {
        std::vector<std::string> vertices;
        std::vector<std::tuple<std::string, std::string, std::string>> edges;
    };
    std::vector<Case> cases = {
        // triangle with a chord
        {{"a", "b", "c"}, {{"e1", "a", "b"}, {"e2", "b", "c"}, {"e3", "c", "a"}, {"e4", "a", "b"}}},
        // theta graph plus pendant edge shape (4 vertices)
        {{"a", "b", "c", "d"},
         {{"e1", "a", "b"}, {"e2", "b", "c"}, {"e3", "c", "a"}, {"e4", "c", "d"}, {"e5", "d", "a"}}},
        // two loops sharing a vertex, mixed orientations
        {{"a", "b", "c"}, {{"e1", "a", "b"}, {"e2", "b", "a"}, {"e3", "b", "c"}, {"e4", "c", "b"}}},
    };
    for (const auto& c : cases) {
        FeynmanGraph g;
        g.name = "case";
        g.dimension = 2;
        g.vertices = c.vertices;
        long m = 1;
        for (const auto& [id, s, t] : c.edges) g.internal_edges.push_back({id, s, t, Rat(m++)});
        validate_graph(g);
        SpanningTree tree = first_tree(g);
        QuadricNet base = restrict_to_subspace(g, momentum_relations(g, tree));
        for (auto schedule : {DeformationSchedule::paper, DeformationSchedule::uniform})
            for (const Rat& eps : {Rat(1, 2), Rat(1, 5), Rat(2, 7)}) {
                QuadricNet net = deform_net(base, tree, eps, schedule);
                ConditionReport rep = verify_conditions(net);
                CHECK(rep.conservation);
                CHECK(rep.smooth);
                CHECK(rep.positive_definite);
            }
    }
}

TEST_CASE("no_real_points via Sylvester") {
    QuadraticForm pd{RatMat::identity(3)};
    CHECK(no_real_points(pd));
    QuadraticForm indef{RatMat::identity(2)};
    indef.a(1, 1) = -1;
    CHECK_FALSE(no_real_points(indef)); // real zero (1 : 1)
    FeynmanGraph g = sunset12();
    SpanningTree tree = first_tree(g);
    QuadricNet net = deform_net(restrict_to_subspace(g, momentum_relations(g, tree)), tree, Rat(1, 3),
                                DeformationSchedule::paper);
    CHECK(no_real_points(net.forms[2])); // A3 at any positive mass and eps = 1/3
}

TEST_CASE("factorization witnesses: materialized vs minor-certified") {
    FeynmanGraph g = sunset12();
    SpanningTree tree = first_tree(g);
    QuadricNet net = deform_net(restrict_to_subspace(g, momentum_relations(g, tree)), tree, Rat(1, 2),
                                DeformationSchedule::paper);
    for (std::size_t i = 0; i < net.form_count(); ++i) {
        WitnessResult w = factorization_witness(net.forms[i]);
        REQUIRE(w.status == WitnessStatus::materialized); // pipeline entries are perfect squares
        CHECK(w.witness->t.transpose() * w.witness->t == net.forms[i].a);
        // the pipeline's own tbar witnesses square to the form as well
        auto t = net.witnesses[i].tbar_at(net.epsilon);
        for (std::size_t s = 0; s < t.size(); ++s) CHECK(t[s] * t[s] == net.forms[i].a(s + 1, s + 1));
    }
    QuadraticForm odd{RatMat::identity(2)};
    odd.a(1, 1) = 2; // 2 is not a rational square
    CHECK(factorization_witness(odd).status == WitnessStatus::minor_certified);
}

TEST_CASE("projective homogeneity q(cu) = c^2 q(u) at random rational points") {
    QuadricNet net = restricted_sunset();
    unsigned state = 99;
    auto next = [&state]() {
        state = state * 1664525u + 1013904223u;
        return Rat(static_cast<long>((state >> 16) % 13) - 6, 1 + ((state >> 8) & 3));
    };
    for (int rep = 0; rep < 25; ++rep) {
        RatVec u(5);
        for (auto& x : u) x = next();
        Rat c = next();
        for (const auto& f : net.forms) {
            RatVec cu = u;
            for (auto& x : cu) x *= c;
            CHECK(f.evaluate(cu) == c * c * f.evaluate(u));
        }
    }
}

TEST_CASE("net dump format") {
    FeynmanGraph g = sunset12();
    SpanningTree tree = first_tree(g);
    QuadricNet net = deform_net(restrict_to_subspace(g, momentum_relations(g, tree)), tree, Rat(1, 2),
                                DeformationSchedule::paper);
    nlohmann::json j = net_to_json(net);
    CHECK(j["epsilon"] == "1/2");
    REQUIRE(j["forms"].size() == 3);
    CHECK(j["forms"][0]["edge"] == "e1");
    CHECK(j["forms"][0]["lower_triangular"].size() == 15); // 5*6/2 entries
    CHECK(j["forms"][0]["lower_triangular"][0] == "1");
    CHECK(j["forms"][1]["lower_triangular"][0] == "4");
}
