#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "forge/classify.hpp"
#include "forge/errors.hpp"
#include "forge/geodesic.hpp"
#include "forge/gstar.hpp"
#include "forge/rng.hpp"
#include "forge/surgery.hpp"
#include "forge/tower.hpp"
#include "forge/word.hpp"

using namespace forge;

namespace {

const Tower& demo2() {
    static Tower t = [] {
        SizeSchedule s;
        s.lambda = 1;
        s.beta = 1;
        return build_tower(s, 2, 7);
    }();
    return t;
}

std::vector<uint64_t> marked_globals(const TowerLevel& L) {
    std::vector<uint64_t> out;
    for (const auto& aset : L.A) {
        for (uint32_t a : aset) out.push_back(L.global_base + a);
    }
    std::sort(out.begin(), out.end());
    return out;
}

Perm branch_perm(const Tower& t, const std::string& word) {
    return word_perm(t, parse_branch_word(word));
}

// Redirect f so that f(a) = target, swapping images to stay a bijection.
void retarget(Perm& f, Perm& finv, uint64_t a, uint64_t target) {
    uint32_t z = finv[target];
    uint32_t old = f[a];
    f[a] = static_cast<uint32_t>(target);
    f[z] = old;
    finv[target] = static_cast<uint32_t>(a);
    finv[old] = z;
}

size_t diff_count(const Perm& a, const Perm& b) {
    size_t n = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] != b[i]) ++n;
    }
    return n;
}

// The fixture carrying an escape at every chain level of <00>: the first
// marked element of each chain block is redirected into a later block.
Perm escape_fixture(const Tower& t) {
    Node eta1 = parse_node("00");
    Perm f = branch_perm(t, "b:00:+");
    Perm finv = inverse_perm(f);
    const TowerLevel& L1 = t.at(parse_node("1"));
    const TowerLevel& L01 = t.at(parse_node("01"));
    uint64_t steal = 0;
    for (int n = 0; n <= 2; ++n) {
        const TowerLevel& L = t.at(prefix(eta1, n));
        const TowerLevel& away = n == 2 ? L01 : L1;
        uint64_t a = marked_globals(L).front();
        retarget(f, finv, a, away.global_base + steal++);
    }
    return f;
}

} // namespace

TEST_CASE("derive_spec records clause data and drops degenerate levels") {
    const Tower& t = demo2();
    Node eta1 = parse_node("00");
    Perm f = branch_perm(t, "b:00:+");

    std::map<int, uint64_t> least;
    for (int n = 0; n <= 2; ++n) {
        least[n] = marked_globals(t.at(prefix(eta1, n))).front();
    }

    SurgerySpec idle = derive_spec(t, f, eta1, eta1, {0, 1, 2}, least);
    CHECK(idle.B.empty());
    CHECK(idle.dropped == std::vector<int>{0, 1, 2});
    CHECK(spec_lines(idle) ==
          std::vector<std::string>{"SPEC levels=- eta1=00 eta2=00 dropped=0,1,2"});

    const TowerLevel& L = t.at(eta1);
    uint64_t d0 = marked_globals(L).front();
    uint32_t d0l = static_cast<uint32_t>(d0 - L.global_base);
    Perm fp = f;
    Perm fpinv = inverse_perm(fp);
    retarget(fp, fpinv, d0, L.global_base + L.f[1][d0l]);

    SurgerySpec spec = derive_spec(t, fp, eta1, eta1, {0, 1, 2}, least);
    CHECK(spec.B == std::vector<int>{2});
    CHECK(spec.dropped == std::vector<int>{0, 1});
    CHECK(spec.a.at(2) == d0);
    CHECK(spec.b.at(2) == L.global_base + L.f[1][d0l]);
    CHECK(spec.e.at(2) == L.global_base + L.f[0][d0l]);
    CHECK(spec.c.at(2) == L.global_base + inverse_perm(L.f[0])[L.f[1][d0l]]);
    CHECK(spec.d.at(2) == L.global_base + L.f[0][L.f[1][d0l]]);
    CHECK(spec.nu.at(2) == eta1);
    CHECK(spec_lines(spec)[0] == "SPEC levels=2 eta1=00 eta2=00 dropped=0,1");
    CHECK(spec_lines(spec)[1] ==
          "N 2 a=" + std::to_string(spec.a.at(2)) + " b=" + std::to_string(spec.b.at(2)) +
              " c=" + std::to_string(spec.c.at(2)) + " d=" + std::to_string(spec.d.at(2)) +
              " e=" + std::to_string(spec.e.at(2)) + " nu=00");

    Perm broken = fp;
    broken[0] = broken[1];
    CHECK_THROWS_AS(derive_spec(t, broken, eta1, eta1, {2}, least), ParseError);
    CHECK_THROWS_AS(derive_spec(t, fp, parse_node("0"), eta1, {2}, least), ParseError);
    CHECK_THROWS_AS(derive_spec(t, fp, eta1, parse_node("0"), {2}, least), ParseError);
    CHECK_THROWS_AS(derive_spec(t, fp, eta1, eta1, {1, 1}, least), ParseError);
    CHECK_THROWS_AS(derive_spec(t, fp, eta1, eta1, {3}, least), ParseError);
    std::map<int, uint64_t> missing;
    CHECK_THROWS_AS(derive_spec(t, fp, eta1, eta1, {2}, missing), ParseError);
    std::map<int, uint64_t> unmarked{{2, L.global_base + L.size - 1}};
    bool last_is_marked = false;
    for (uint64_t m : marked_globals(L)) {
        if (m == unmarked.at(2)) last_is_marked = true;
    }
    REQUIRE(!last_is_marked);
    CHECK_THROWS_AS(derive_spec(t, fp, eta1, eta1, {2}, unmarked), ParseError);
}

TEST_CASE("build_g rewires exactly three points per level") {
    const Tower& t = demo2();
    Node eta1 = parse_node("00");
    const TowerLevel& L2 = t.at(eta1);
    const TowerLevel& L1 = t.at(parse_node("0"));

    Perm f = branch_perm(t, "b:00:+");
    Perm finv = inverse_perm(f);
    uint64_t a1 = marked_globals(L1).front();
    uint64_t a2 = marked_globals(L2).front();
    uint32_t a1l = static_cast<uint32_t>(a1 - L1.global_base);
    uint32_t a2l = static_cast<uint32_t>(a2 - L2.global_base);
    retarget(f, finv, a1, L1.global_base + L1.f[1][a1l]);
    retarget(f, finv, a2, L2.global_base + L2.f[1][a2l]);

    std::map<int, uint64_t> a{{1, a1}, {2, a2}};
    SurgerySpec spec = derive_spec(t, f, eta1, eta1, {1, 2}, a);
    REQUIRE(spec.B == std::vector<int>{1, 2});

    Perm F = f1(t, f);
    Perm g = build_g(t, f, spec);
    CHECK(is_permutation(g));
    CHECK(fixed_point_free(g));
    CHECK(diff_count(g, F) == 6);
    for (int n : spec.B) {
        CHECK(g[spec.a.at(n)] == spec.b.at(n));
        CHECK(g[spec.b.at(n)] == spec.e.at(n));
        CHECK(g[spec.c.at(n)] == spec.d.at(n));
    }
    CHECK(build_g(t, f, spec) == g);

    SurgerySpec single = derive_spec(t, f, eta1, eta1, {2}, a);
    Perm g2 = build_g(t, f, single);
    CHECK(diff_count(g2, F) == 3);
}

TEST_CASE("build_g rejects collisions and fixed points") {
    const Tower& t = demo2();
    Node eta1 = parse_node("00");
    const TowerLevel& L = t.at(eta1);
    Perm f = branch_perm(t, "b:00:+");
    Perm F = f1(t, f);
    Perm Finv = inverse_perm(F);
    uint64_t a = marked_globals(L).front();

    SurgerySpec twice;
    twice.eta1 = eta1;
    twice.eta2 = eta1;
    twice.B = {2};
    twice.a[2] = a;
    twice.b[2] = F[F[a]];
    twice.e[2] = F[a];
    twice.c[2] = a;
    twice.d[2] = Finv[a];
    CHECK_THROWS_AS(build_g(t, f, twice), NotBijective);

    uint64_t y = a + 1;
    REQUIRE(y < L.global_base + L.size);
    SurgerySpec dup;
    dup.eta1 = eta1;
    dup.eta2 = eta1;
    dup.B = {2};
    dup.a[2] = a;
    dup.b[2] = F[y];
    dup.e[2] = F[a];
    dup.c[2] = Finv[F[F[y]]];
    dup.d[2] = F[F[F[y]]];
    CHECK_THROWS_AS(build_g(t, f, dup), NotBijective);

    SurgerySpec fix;
    fix.eta1 = eta1;
    fix.eta2 = eta1;
    fix.B = {2};
    fix.a[2] = a;
    fix.b[2] = a;
    fix.e[2] = a;
    fix.c[2] = Finv[a];
    fix.d[2] = F[a];
    CHECK_THROWS_AS(build_g(t, f, fix), FixedPointViolation);
}

TEST_CASE("detect_case separates the disjuncts") {
    const Tower& t = demo2();
    Node eta1 = parse_node("00");
    const TowerLevel& L0 = t.at(Node{});
    const TowerLevel& L1 = t.at(parse_node("0"));
    const TowerLevel& L2 = t.at(eta1);
    uint64_t m0 = marked_globals(L0).front();
    uint64_t m1 = marked_globals(L1).front();
    uint64_t d0 = marked_globals(L2).front();
    uint32_t m1l = static_cast<uint32_t>(m1 - L1.global_base);
    uint32_t d0l = static_cast<uint32_t>(d0 - L2.global_base);
    GeodesicEngine eng1(L1);
    GeodesicEngine eng2(L2);

    Perm fe = escape_fixture(t);
    std::map<int, uint64_t> ea{{0, m0}, {2, d0}};
    SurgerySpec away = derive_spec(t, fe, eta1, parse_node("01"), {0, 2}, ea);
    REQUIRE(away.B == std::vector<int>{0, 2});
    CHECK(away.nu.at(0) == parse_node("1"));
    CHECK(away.nu.at(2) == parse_node("01"));
    CHECK(detect_case(t, away, fe) == CaseTag::Ka);
    CHECK(case_name(CaseTag::Ka) == "Ka");

    SurgerySpec stale = derive_spec(t, fe, eta1, parse_node("10"), {0, 2}, ea);
    CHECK_THROWS_AS(detect_case(t, stale, fe), NoCase);

    Perm fb = branch_perm(t, "b:00:+");
    Perm fbinv = inverse_perm(fb);
    retarget(fb, fbinv, m1, L1.global_base + L1.f[1][m1l]);
    std::vector<uint32_t> dist = eng2.distances_from(d0l);
    uint32_t far = 0;
    while (dist[far] != 2) ++far;
    retarget(fb, fbinv, d0, L2.global_base + far);
    REQUIRE(eng1.geodesic(m1l, L1.f[1][m1l]).steps ==
            std::vector<GeodesicStep>{GeodesicStep{parse_node("1"), +1}});
    REQUIRE(eng2.geodesic(d0l, far).length() == 2);
    std::map<int, uint64_t> ba{{1, m1}, {2, d0}};
    SurgerySpec grow = derive_spec(t, fb, eta1, eta1, {1, 2}, ba);
    REQUIRE(grow.B == std::vector<int>{1, 2});
    CHECK(detect_case(t, grow, fb) == CaseTag::Kb);

    Perm fc = branch_perm(t, "b:00:+");
    Perm fcinv = inverse_perm(fc);
    retarget(fc, fcinv, m1, L1.global_base + L1.f[1][m1l]);
    retarget(fc, fcinv, d0, L2.global_base + L2.f[1][d0l]);
    REQUIRE(eng2.geodesic(d0l, L2.f[1][d0l]).steps ==
            std::vector<GeodesicStep>{GeodesicStep{parse_node("01"), +1}});
    SurgerySpec split = derive_spec(t, fc, eta1, eta1, {1, 2}, ba);
    REQUIRE(split.B == std::vector<int>{1, 2});
    CHECK(detect_case(t, split, fc) == CaseTag::Kc);

    Perm fs = branch_perm(t, "b:00:+");
    Perm fsinv = inverse_perm(fs);
    retarget(fs, fsinv, m1, L1.global_base + L1.f[1][m1l]);
    retarget(fs, fsinv, d0, L2.global_base + inverse_perm(L2.f[1])[d0l]);
    REQUIRE(eng2.geodesic(d0l, inverse_perm(L2.f[1])[d0l]).steps ==
            std::vector<GeodesicStep>{GeodesicStep{parse_node("01"), -1}});
    SurgerySpec skew = derive_spec(t, fs, eta1, eta1, {1, 2}, ba);
    REQUIRE(skew.B == std::vector<int>{1, 2});
    CHECK_THROWS_AS(detect_case(t, skew, fs), NoCase);

    Perm fi = branch_perm(t, "b:00:+");
    SurgerySpec empty = derive_spec(t, fi, eta1, eta1, {2}, ba);
    REQUIRE(empty.B.empty());
    CHECK_THROWS_AS(detect_case(t, empty, fi), AmbiguousCase);

    Perm fv = branch_perm(t, "b:00:+");
    Perm fvinv = inverse_perm(fv);
    retarget(fv, fvinv, d0, L2.global_base + far);
    SurgerySpec lone = derive_spec(t, fv, eta1, eta1, {2}, ba);
    REQUIRE(lone.B == std::vector<int>{2});
    CHECK_THROWS_AS(detect_case(t, lone, fv), AmbiguousCase);

    Perm broken = fv;
    broken[0] = broken[1];
    CHECK_THROWS_AS(detect_case(t, lone, broken), ParseError);
}

TEST_CASE("pick_g returns the branch permutation on persistent fixed points") {
    const Tower& t = demo2();
    Perm id = identity_perm(t.universe_size);
    auto [spec, g] = pick_g(t, id);
    CHECK(spec.B.empty());
    CHECK(spec.eta1 == parse_node("00"));
    CHECK(spec.eta2 == parse_node("00"));
    CHECK(g == branch_perm(t, "b:00:+"));
}

TEST_CASE("pick_g turns escapes into a guide branch") {
    const Tower& t = demo2();
    Node eta1 = parse_node("00");
    Perm f = escape_fixture(t);
    REQUIRE(branch_code(t, f) == eta1);

    auto [spec, g] = pick_g(t, f);
    CHECK(spec.eta1 == eta1);
    CHECK(spec.eta2 == parse_node("01"));
    CHECK(spec.B == std::vector<int>{0, 2});
    CHECK(spec.dropped.empty());
    CHECK(spec.a.at(0) == marked_globals(t.at(Node{})).front());
    CHECK(spec.a.at(2) == marked_globals(t.at(eta1)).front());
    CHECK(spec.b.at(0) == t.at(parse_node("1")).global_base);
    CHECK(spec.b.at(2) == t.at(parse_node("01")).global_base + 2);
    CHECK(spec.nu.at(0) == parse_node("1"));
    CHECK(spec.nu.at(2) == parse_node("01"));
    CHECK(detect_case(t, spec, f) == CaseTag::Ka);
    CHECK(fixed_point_free(g));
    CHECK(diff_count(g, f1(t, f)) == 6);

    auto [spec2, g2] = pick_g(t, f);
    CHECK(spec_lines(spec2) == spec_lines(spec));
    CHECK(g2 == g);
}

TEST_CASE("pick_g turns growing decompositions into a level chain") {
    const Tower& t = demo2();
    Node eta1 = parse_node("00");
    const TowerLevel& L2 = t.at(eta1);
    std::vector<uint64_t> deep = marked_globals(L2);
    uint64_t d0 = deep.front();
    uint32_t d0l = static_cast<uint32_t>(d0 - L2.global_base);

    Perm f = branch_perm(t, "b:00:+");
    Perm finv = inverse_perm(f);
    GeodesicEngine eng(L2);
    std::vector<uint32_t> dist = eng.distances_from(d0l);
    uint32_t far = 0;
    while (dist[far] != 2) ++far;
    uint64_t displaced = finv[L2.global_base + far];
    REQUIRE(!std::binary_search(deep.begin(), deep.end(), displaced));
    retarget(f, finv, d0, L2.global_base + far);

    ClassifierReport r = classify(t, f, eta1);
    REQUIRE(r.b14 == 1);

    auto [spec, g] = pick_g(t, f);
    CHECK(spec.B == std::vector<int>{2});
    CHECK(spec.dropped == std::vector<int>{0});
    CHECK(spec.a.at(2) == d0);
    CHECK(spec.b.at(2) == L2.global_base + far);
    CHECK_THROWS_AS(detect_case(t, spec, f), AmbiguousCase);
    CHECK(fixed_point_free(g));
    CHECK(diff_count(g, f1(t, f)) == 3);
}

TEST_CASE("pick_g turns an incomparable chain into a spec") {
    const Tower& t = demo2();
    Node eta1 = parse_node("00");
    const TowerLevel& L1 = t.at(parse_node("0"));
    const TowerLevel& L2 = t.at(eta1);
    std::vector<uint64_t> m1 = marked_globals(L1);
    REQUIRE(m1.size() == 2);
    uint64_t d0 = marked_globals(L2).front();
    uint32_t a2 = static_cast<uint32_t>(m1[1] - L1.global_base);
    uint32_t d0l = static_cast<uint32_t>(d0 - L2.global_base);

    Perm f = branch_perm(t, "b:00:+");
    Perm finv = inverse_perm(f);
    retarget(f, finv, m1[1], L1.global_base + L1.f[1][a2]);
    retarget(f, finv, d0, L2.global_base + L2.f[1][d0l]);
    REQUIRE(branch_code(t, f) == eta1);

    ClassifierReport r = classify(t, f, eta1);
    REQUIRE(r.b16 == 1);
    r = extract_families(t, f, eta1, r);
    REQUIRE(r.family_found);
    REQUIRE(r.family.incomparable);
    REQUIRE(r.family.members[1] == std::vector<uint64_t>{m1[1]});
    REQUIRE(r.family.members[2] == std::vector<uint64_t>{d0});
    REQUIRE(r.family.labels[2] == std::vector<Node>{parse_node("01")});

    auto [spec, g] = pick_g(t, f);
    CHECK(spec.B == std::vector<int>{1, 2});
    CHECK(spec.dropped.empty());
    CHECK(spec.eta2 == eta1);
    CHECK(spec.a.at(1) == m1[1]);
    CHECK(spec.a.at(2) == d0);
    CHECK(spec.b.at(1) == L1.global_base + L1.f[1][a2]);
    CHECK(spec.b.at(2) == L2.global_base + L2.f[1][d0l]);
    CHECK(detect_case(t, spec, f) == CaseTag::Kc);
    CHECK(fixed_point_free(g));
    CHECK(diff_count(g, f1(t, f)) == 6);
}

TEST_CASE("pick_g turns a misaligned shape chain into a spec") {
    const Tower& t = demo2();
    Node eta1 = parse_node("00");
    const TowerLevel& L1 = t.at(parse_node("0"));
    const TowerLevel& L2 = t.at(eta1);
    std::vector<uint64_t> m1 = marked_globals(L1);
    std::vector<uint64_t> deep = marked_globals(L2);

    Perm f = branch_perm(t, "b:00:+");
    Perm finv = inverse_perm(f);
    for (uint64_t a : m1) {
        uint32_t al = static_cast<uint32_t>(a - L1.global_base);
        retarget(f, finv, a, L1.global_base + L1.f[1][al]);
    }
    for (uint64_t a : deep) {
        uint32_t al = static_cast<uint32_t>(a - L2.global_base);
        retarget(f, finv, a, L2.global_base + L2.f[1][al]);
    }
    REQUIRE(branch_code(t, f) == eta1);

    ClassifierReport r = classify(t, f, eta1);
    REQUIRE(r.b11 == 0);
    REQUIRE(r.b12 == 0);
    REQUIRE(r.b14 == 0);
    REQUIRE(r.b16 == 0);
    r = extract_families(t, f, eta1, r);
    REQUIRE(r.family_found);
    REQUIRE(!r.family.incomparable);
    REQUIRE(r.family.levels == std::vector<int>{1, 2});
    REQUIRE(r.family.comparability == std::vector<int>{0});
    REQUIRE(r.b26 == 1);
    REQUIRE(r.b26p == 1);

    auto [spec, g] = pick_g(t, f);
    CHECK(spec.B == std::vector<int>{1, 2});
    CHECK(spec.a.at(1) == m1.front());
    CHECK(spec.a.at(2) == deep.front());
    CHECK(detect_case(t, spec, f) == CaseTag::Kc);
    CHECK(fixed_point_free(g));
}

TEST_CASE("pick_g reports when no disjunct is witnessed") {
    const Tower& t = demo2();
    Perm f = branch_perm(t, "b:00:+");
    CHECK_THROWS_AS(pick_g(t, f), NoSpecFound);
}

TEST_CASE("recover_word round trips short branch words") {
    const Tower& t = demo2();

    RecoveredWord none = recover_word(t, identity_perm(t.universe_size), 2);
    CHECK(none.letters.empty());
    CHECK(none.exceptional_nodes.empty());

    for (const Node& nu : nodes_of_length(2)) {
        for (int sign : {+1, -1}) {
            BranchWord w{{BranchLetter{nu, sign}}};
            RecoveredWord got = recover_word(t, word_perm(t, w), 1);
            REQUIRE(got.letters.size() == 1);
            CHECK(got.letters.front() == BranchLetter{nu, sign});
            CHECK(got.exceptional_nodes.empty());
        }
    }

    Perm two = branch_perm(t, "b:01:+ b:10:-");
    std::vector<BranchLetter> expect{BranchLetter{parse_node("01"), +1},
                                     BranchLetter{parse_node("10"), -1}};
    CHECK(recover_word(t, two, 2).letters == expect);
    CHECK(recover_word(t, two, 5).letters == expect);
}

TEST_CASE("recover_word tolerates few exceptional blocks") {
    const Tower& t = demo2();
    const TowerLevel& L11 = t.at(parse_node("11"));
    const TowerLevel& L10 = t.at(parse_node("10"));
    const TowerLevel& L01 = t.at(parse_node("01"));

    Perm h = branch_perm(t, "b:00:+");
    std::swap(h[L11.global_base], h[L11.global_base + 1]);
    RecoveredWord one = recover_word(t, h, 2);
    CHECK(one.letters == std::vector<BranchLetter>{BranchLetter{parse_node("00"), +1}});
    CHECK(one.exceptional_nodes == std::vector<Node>{parse_node("11")});

    std::swap(h[L10.global_base], h[L10.global_base + 1]);
    CHECK_THROWS_AS(recover_word(t, h, 2), Unrepresentable);

    Perm id = identity_perm(t.universe_size);
    std::swap(id[L11.global_base], id[L11.global_base + 1]);
    RecoveredWord still = recover_word(t, id, 2);
    CHECK(still.letters.empty());
    CHECK(still.exceptional_nodes == std::vector<Node>{parse_node("11")});
    std::swap(id[L10.global_base], id[L10.global_base + 1]);
    CHECK_THROWS_AS(recover_word(t, id, 2), Unrepresentable);

    Perm pair = branch_perm(t, "b:01:+ b:10:-");
    std::swap(pair[L11.global_base], pair[L11.global_base + 1]);
    std::swap(pair[L10.global_base], pair[L10.global_base + 1]);
    RecoveredWord wide = recover_word(t, pair, 2);
    CHECK(wide.letters.size() == 2);
    CHECK(wide.exceptional_nodes ==
          std::vector<Node>{parse_node("10"), parse_node("11")});
    std::swap(pair[L01.global_base], pair[L01.global_base + 1]);
    CHECK_THROWS_AS(recover_word(t, pair, 2), Unrepresentable);
}

TEST_CASE("recover_word rejects unrepresentable permutations") {
    const Tower& t = demo2();

    Perm shuffled = identity_perm(t.universe_size);
    Rng rng(99);
    rng.shuffle(shuffled);
    REQUIRE(is_permutation(shuffled));
    CHECK_THROWS_AS(recover_word(t, shuffled, 2), Unrepresentable);

    Perm mixed = branch_perm(t, "b:00:+");
    const TowerLevel& L11 = t.at(parse_node("11"));
    for (uint32_t x = 0; x < L11.size; ++x) {
        mixed[L11.global_base + x] = static_cast<uint32_t>(L11.global_base + L11.f[1][x]);
    }
    REQUIRE(is_permutation(mixed));
    CHECK_THROWS_AS(recover_word(t, mixed, 2), Unrepresentable);

    Perm single = branch_perm(t, "b:01:+");
    CHECK_THROWS_AS(recover_word(t, single, 0), Unrepresentable);
    CHECK_THROWS_AS(recover_word(t, single, -1), ParseError);
    CHECK_THROWS_AS(recover_word(t, identity_perm(4), 1), ParseError);
    Perm broken = single;
    broken[0] = broken[1];
    CHECK_THROWS_AS(recover_word(t, broken, 1), ParseError);
}
