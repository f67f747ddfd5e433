#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "forge/classify.hpp"
#include "forge/errors.hpp"
#include "forge/geodesic.hpp"
#include "forge/gstar.hpp"
#include "forge/ideal.hpp"
#include "forge/surgery.hpp"
#include "forge/tower.hpp"

using namespace forge;

namespace {

// Collects report lines; flushes to stdout or, with --report, to a file.
// Detail lines are dropped under --quiet, summary lines always survive.
struct Sink {
    bool quiet = false;
    std::string report_path;
    std::string text;

    void line(const std::string& s) {
        text += s;
        text += '\n';
    }
    void detail(const std::string& s) {
        if (!quiet) line(s);
    }
    int flush(int code) {
        if (!report_path.empty()) {
            std::ofstream out(report_path, std::ios::binary);
            out << text;
            if (!out) {
                std::fprintf(stderr, "error: cannot write report to '%s'\n",
                             report_path.c_str());
                return 1;
            }
        } else {
            std::fwrite(text.data(), 1, text.size(), stdout);
        }
        return code;
    }
};

void add_common(CLI::App* sub, Sink& sink) {
    sub->add_flag("--quiet", sink.quiet, "suppress per-item lines, keep summaries");
    sub->add_option("--report", sink.report_path, "write the report to a file instead of stdout");
}

struct BuildCfg {
    int depth = 2;
    std::string profile = "demo";
    uint64_t lambda = 2;
    uint64_t beta = 2;
    uint64_t seed = 1;
    uint64_t max_group = uint64_t{1} << 22;
    std::string out = "tower.txt";
    std::string config_path;
};

// key=value lines mirroring the build flags; '#' starts a comment. Values
// from the file never override flags given on the command line.
void merge_config(const CLI::App* sub, BuildCfg& cfg) {
    std::ifstream in(cfg.config_path);
    if (!in) throw CLI::ValidationError("--config", "cannot open '" + cfg.config_path + "'");
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw CLI::ValidationError(
                "--config", "line " + std::to_string(lineno) + ": expected key=value");
        }
        std::string key = line.substr(0, eq);
        std::string val = line.substr(eq + 1);
        auto taken = [&](const std::string& flag) { return sub->count(flag) > 0; };
        try {
            if (key == "depth") {
                if (!taken("--depth")) cfg.depth = std::stoi(val);
            } else if (key == "profile") {
                if (!taken("--profile")) cfg.profile = val;
            } else if (key == "lambda") {
                if (!taken("--lambda")) cfg.lambda = std::stoull(val);
            } else if (key == "beta") {
                if (!taken("--beta")) cfg.beta = std::stoull(val);
            } else if (key == "seed") {
                if (!taken("--seed")) cfg.seed = std::stoull(val);
            } else if (key == "max-group") {
                if (!taken("--max-group")) cfg.max_group = std::stoull(val);
            } else if (key == "out") {
                if (!taken("--out")) cfg.out = val;
            } else {
                throw CLI::ValidationError(
                    "--config", "line " + std::to_string(lineno) + ": unknown key '" + key + "'");
            }
        } catch (const std::invalid_argument&) {
            throw CLI::ValidationError(
                "--config", "line " + std::to_string(lineno) + ": bad value '" + val + "'");
        }
    }
}

int run_build(const CLI::App* sub, BuildCfg cfg, Sink& sink) {
    if (!cfg.config_path.empty()) merge_config(sub, cfg);
    if (cfg.lambda < 1) throw CLI::ValidationError("--lambda", "must be at least 1");
    if (cfg.beta < 2) throw CLI::ValidationError("--beta", "must be at least 2");
    if (cfg.max_group < 2) throw CLI::ValidationError("--max-group", "must be at least 2");
    SizeSchedule s;
    try {
        s.profile = parse_profile(cfg.profile);
    } catch (const ParseError& e) {
        throw CLI::ValidationError("--profile", e.what());
    }
    s.lambda = cfg.lambda;
    s.beta = cfg.beta;
    s.max_group = cfg.max_group;
    if (cfg.depth < 0 || cfg.depth > s.max_depth) {
        throw CLI::ValidationError("--depth", "must be between 0 and " +
                                                  std::to_string(s.max_depth) + ", got " +
                                                  std::to_string(cfg.depth));
    }

    Tower t = build_tower(s, cfg.depth, cfg.seed);
    save_tower(t, cfg.out);
    for (const TowerLevel& L : t.levels) {
        sink.detail("LEVEL " + node_str(L.node) + " size=" + std::to_string(L.size) +
                    " base=" + std::to_string(L.global_base) + " n1=" + std::to_string(L.n1) +
                    " n0=" + std::to_string(L.n0) + " lsep=" + std::to_string(L.lsep));
    }
    sink.line("BUILD ok profile=" + profile_name(s.profile) + " depth=" +
              std::to_string(cfg.depth) + " lambda=" + std::to_string(s.lambda) +
              " beta=" + std::to_string(s.beta) + " seed=" + std::to_string(cfg.seed) +
              " levels=" + std::to_string(t.levels.size()) +
              " universe=" + std::to_string(t.universe_size) + " out=" + cfg.out);
    return 0;
}

int run_verify(const std::string& path, Sink& sink) {
    Tower t = load_tower(path);
    VerifyReport r = verify_tower(t);
    for (const auto& m : r.margins) {
        sink.detail("LEVEL " + node_str(m.node) + " size=" + std::to_string(m.size) +
                    " anc=" + std::to_string(m.anc_sum) + " n1=" + std::to_string(m.n1) +
                    " n0=" + std::to_string(m.n0) + " aset=" + std::to_string(m.aset));
    }
    if (!r.ok) {
        for (const std::string& v : r.violations) sink.line("VIOLATION " + v);
        sink.line("VERIFY failed violations=" + std::to_string(r.violations.size()));
        return 1;
    }
    sink.line("VERIFY ok levels=" + std::to_string(t.levels.size()) +
              " universe=" + std::to_string(t.universe_size));
    return 0;
}

const TowerLevel& block_at(const Tower& t, const std::string& bits) {
    const TowerLevel* L = t.find(parse_node(bits));
    if (!L) throw ParseError("no block at node " + bits);
    return *L;
}

int run_geodesic(const std::string& path, const std::string& bits, uint64_t from, uint64_t to,
                 Sink& sink) {
    Tower t = load_tower(path);
    const TowerLevel& L = block_at(t, bits);
    if (from >= L.size || to >= L.size) {
        throw ParseError("elements must be below the block size " + std::to_string(L.size));
    }
    Geodesic g = level_geodesic(L, static_cast<uint32_t>(from), static_cast<uint32_t>(to));
    sink.line("GEODESIC node=" + node_str(L.node) + " from=" + std::to_string(from) +
              " to=" + std::to_string(to) + " length=" + std::to_string(g.length()));
    sink.line("STEPS " + geodesic_str(g));
    return 0;
}

int run_census(const std::string& path, const std::string& bits, Sink& sink) {
    Tower t = load_tower(path);
    const TowerLevel& L = block_at(t, bits);
    DistanceCensus c = distance_census(L);
    for (size_t d = 0; d < c.histogram.size(); ++d) {
        sink.detail("DIST d=" + std::to_string(d) + " pairs=" + std::to_string(c.histogram[d]));
    }
    sink.line("CENSUS node=" + node_str(L.node) + " size=" + std::to_string(L.size) +
              " diameter=" + std::to_string(c.diameter));
    return 0;
}

int run_eval(const std::string& path, const std::string& word, bool census, Sink& sink) {
    Tower t = load_tower(path);
    BranchWord w = parse_branch_word(word);
    FixedPointReport fp = fixed_points(t, w);
    sink.line("EVAL word=\"" + branch_word_str(w) + "\" letters=" + std::to_string(w.size()) +
              " reduced=" + (branch_word_reduced(w) ? std::string("yes") : std::string("no")) +
              " sep=" + std::to_string(separation_depth(w)));
    if (census) {
        for (size_t i = 0; i < t.levels.size(); ++i) {
            sink.detail("FIXLEVEL " + node_str(t.levels[i].node) + " count=" +
                        std::to_string(fp.per_level[i]));
        }
    }
    std::string tail = fp.trivial_word
                           ? std::string(" trivial=yes")
                           : " confinement_depth=" + std::to_string(fp.confinement_depth);
    sink.line("FIXED total=" + std::to_string(fp.total) + tail);
    if (branch_word_reduced(w) && !w.empty()) {
        sink.line(std::string("CONFINED ") + (confinement_check(t, w) ? "yes" : "no"));
    }
    return 0;
}

int run_ideal(const std::string& path, const std::string& gens_path, Sink& sink) {
    Tower t = load_tower(path);
    std::vector<IdealGenerator> gens = load_generators(gens_path);
    if (gens.empty()) throw ParseError("no generators in '" + gens_path + "'");
    bool all_ok = true;
    for (size_t i = 0; i < gens.size(); ++i) {
        bool ok = verify_witness(t, gens[i].v, gens[i].witness);
        all_ok = all_ok && ok;
        sink.detail("WITNESS " + std::to_string(i) + " node=" + node_str(gens[i].witness) +
                    " elems=" + std::to_string(gens[i].v.size()) +
                    " ok=" + (ok ? "yes" : "no"));
    }
    if (!all_ok) {
        sink.line("IDEAL failed: some witness is invalid");
        return 1;
    }
    Node avoid = find_avoiding_node(t, gens);
    bool materialized = avoid.lg() <= t.depth;
    sink.line("AVOID node=" + node_str(avoid) +
              " materialized=" + (materialized ? "yes" : "no"));
    if (materialized) {
        const TowerLevel& L = t.at(avoid);
        for (size_t i = 0; i < gens.size(); ++i) {
            uint64_t overlap = 0;
            for (uint64_t id : gens[i].v) {
                if (id >= L.global_base && id < L.global_base + L.size) ++overlap;
            }
            sink.detail("CHECK gen=" + std::to_string(i) +
                        " overlap=" + std::to_string(overlap));
            if (overlap) {
                sink.line("IDEAL failed: avoiding block intersects generator " +
                          std::to_string(i));
                return 1;
            }
        }
    }
    sink.line("IDEAL ok generators=" + std::to_string(gens.size()));
    return 0;
}

int run_classify(const std::string& path, const std::string& perm_path, std::string eta1_bits,
                 Sink& sink) {
    Tower t = load_tower(path);
    Perm f = load_perm_file(perm_path, t.universe_size);
    Node eta1 = eta1_bits.empty() ? branch_code(t, f) : parse_node(eta1_bits);
    ClassifierReport r = classify(t, f, eta1);
    r = extract_families(t, f, eta1, r);

    sink.line("CLASSIFY eta1=" + node_str(eta1) + " horizon=" + std::to_string(r.horizon) +
              " fix=" + std::to_string(r.fix_count));
    std::string esc;
    for (int n : r.escape_levels) esc += (esc.empty() ? "" : ",") + std::to_string(n);
    if (esc.empty()) esc = "-";
    sink.line("BITS b11=" + std::to_string(r.b11) + " b12=" + std::to_string(r.b12) +
              " b13=" + std::to_string(r.b13) + " b14=" + std::to_string(r.b14) +
              " b15=" + std::to_string(r.b15) + " b16=" + std::to_string(r.b16) +
              " b26=" + std::to_string(r.b26) + " b26p=" + std::to_string(r.b26p) +
              " escapes=" + esc);
    for (const auto& [n, vn] : r.v) {
        uint32_t lmax = 0;
        for (uint32_t l : r.lvals.at(n)) lmax = std::max(lmax, l);
        sink.detail("SURVIVORS n=" + std::to_string(n) + " count=" + std::to_string(vn.size()) +
                    " lmax=" + std::to_string(lmax));
    }
    if (r.family_found) {
        const ExtractedFamily& fam = r.family;
        std::string levels;
        for (int n : fam.levels) levels += (levels.empty() ? "" : ",") + std::to_string(n);
        std::string signs;
        for (int s : fam.signs) signs += (signs.empty() ? "" : ",") + std::string(s > 0 ? "+" : "-");
        sink.line("FAMILY kind=" + std::string(fam.incomparable ? "incomparable" : "shape") +
                  " levels=" + levels + " l_star=" + std::to_string(fam.l_star) +
                  (fam.incomparable ? " l_star_star=" + std::to_string(fam.l_star_star)
                                    : std::string()) +
                  " signs=" + signs);
        for (int n : fam.levels) {
            std::string labels;
            for (const Node& nu : fam.labels.at(n)) {
                labels += (labels.empty() ? "" : ",") + node_str(nu);
            }
            sink.detail("TUPLE n=" + std::to_string(n) + " members=" +
                        std::to_string(fam.members.at(n).size()) + " labels=" + labels);
        }
    } else {
        sink.line("FAMILY none (" + r.family_note + ")");
    }
    return 0;
}

int run_surgery(const std::string& path, const std::string& perm_path, bool pick,
                const std::string& out, Sink& sink) {
    if (!pick) throw CLI::ValidationError("--pick", "surgery requires --pick");
    Tower t = load_tower(path);
    Perm f = load_perm_file(perm_path, t.universe_size);
    auto [spec, g] = pick_g(t, f);
    for (const std::string& l : spec_lines(spec)) sink.line(l);
    if (spec.B.empty()) {
        sink.line("CASE none (kept the branch permutation)");
    } else {
        try {
            sink.line("CASE " + case_name(detect_case(t, spec, f)));
        } catch (const AmbiguousCase& e) {
            sink.line("CASE ambiguous (" + std::string(e.what()) + ")");
        }
    }
    Perm F = f1(t, f);
    uint64_t diffs = 0;
    for (size_t i = 0; i < g.size(); ++i) {
        if (g[i] != F[i]) ++diffs;
    }
    sink.line("G universe=" + std::to_string(g.size()) + " diffs=" + std::to_string(diffs) +
              " fixed=" + std::to_string(count_fixed_points(g)));
    if (!out.empty()) {
        save_perm_file(g, out);
        sink.line("SAVED " + out);
    }
    return 0;
}

int run_recover(const std::string& path, const std::string& perm_path, int max_len, Sink& sink) {
    Tower t = load_tower(path);
    Perm h = load_perm_file(perm_path, t.universe_size);
    RecoveredWord w = recover_word(t, h, max_len);
    BranchWord bw{w.letters};
    sink.line("WORD letters=" + std::to_string(bw.size()) + " \"" + branch_word_str(bw) + "\"");
    std::string nodes;
    for (const Node& n : w.exceptional_nodes) nodes += " " + node_str(n);
    sink.line("EXCEPTIONAL count=" + std::to_string(w.exceptional_nodes.size()) + nodes);
    return 0;
}

int run_export(const std::string& path, const std::string& out, Sink& sink) {
    Tower t = load_tower(path);
    std::string j = tower_to_json(t);
    if (out.empty()) {
        sink.text += j;
        sink.text += '\n';
    } else {
        std::ofstream o(out, std::ios::binary);
        o << j << '\n';
        if (!o) throw ParseError("cannot write '" + out + "'");
        sink.line("EXPORT ok bytes=" + std::to_string(j.size() + 1) + " out=" + out);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite group tower workbench"};
    app.require_subcommand(1);
    Sink sink;
    int rc = 0;

    auto* build = app.add_subcommand("build", "construct a tower and save it");
    BuildCfg cfg;
    build->add_option("--depth", cfg.depth, "tree depth (0..2)");
    build->add_option("--profile", cfg.profile, "size profile: demo or strict");
    build->add_option("--lambda", cfg.lambda, "dominance multiplier (>= 1)");
    build->add_option("--beta", cfg.beta, "demo growth factor (>= 2)");
    build->add_option("--seed", cfg.seed, "construction seed");
    build->add_option("--max-group", cfg.max_group, "cap on a single block size");
    build->add_option("-o,--out", cfg.out, "output tower file");
    build->add_option("--config", cfg.config_path, "key=value file mirroring the flags");
    add_common(build, sink);
    build->callback([&] { rc = run_build(build, cfg, sink); });

    auto* verify = app.add_subcommand("verify", "check a saved tower, never rewriting it");
    std::string verify_path;
    verify->add_option("tower", verify_path, "tower file")->required();
    add_common(verify, sink);
    verify->callback([&] { rc = run_verify(verify_path, sink); });

    auto* geo = app.add_subcommand("geodesic", "canonical decomposition inside one block");
    std::string geo_path, geo_node;
    uint64_t geo_from = 0, geo_to = 0;
    geo->add_option("tower", geo_path, "tower file")->required();
    geo->add_option("--node", geo_node, "block node bits ('-' for the root)")->required();
    geo->add_option("--from", geo_from, "source element (block-local)")->required();
    geo->add_option("--to", geo_to, "target element (block-local)")->required();
    add_common(geo, sink);
    geo->callback([&] { rc = run_geodesic(geo_path, geo_node, geo_from, geo_to, sink); });

    auto* census = app.add_subcommand("census", "distance histogram of one block");
    std::string census_path, census_node;
    census->add_option("tower", census_path, "tower file")->required();
    census->add_option("--node", census_node, "block node bits ('-' for the root)")->required();
    add_common(census, sink);
    census->callback([&] { rc = run_census(census_path, census_node, sink); });

    auto* eval = app.add_subcommand("eval", "evaluate a branch word over the universe");
    std::string eval_path, eval_word;
    bool eval_census = false;
    eval->add_option("tower", eval_path, "tower file")->required();
    eval->add_option("--word", eval_word, "branch word, e.g. \"b:01:+ b:10:-\"")->required();
    eval->add_flag("--census", eval_census, "print per-level fixed point counts");
    add_common(eval, sink);
    eval->callback([&] { rc = run_eval(eval_path, eval_word, eval_census, sink); });

    auto* ideal = app.add_subcommand("ideal", "witness checks and the avoiding block");
    std::string ideal_path, ideal_gens;
    ideal->add_option("tower", ideal_path, "tower file")->required();
    ideal->add_option("--gens", ideal_gens, "generator file (GEN <bits> <id id ...>)")
        ->required();
    add_common(ideal, sink);
    ideal->callback([&] { rc = run_ideal(ideal_path, ideal_gens, sink); });

    auto* classify_cmd = app.add_subcommand("classify", "run the classifier on a permutation");
    std::string cls_path, cls_perm, cls_eta1;
    classify_cmd->add_option("tower", cls_path, "tower file")->required();
    classify_cmd->add_option("--perm", cls_perm, "permutation file (PERM <n> + pairs)")
        ->required();
    classify_cmd->add_option("--eta1", cls_eta1, "chain branch bits (default: the code branch)");
    add_common(classify_cmd, sink);
    classify_cmd->callback([&] { rc = run_classify(cls_path, cls_perm, cls_eta1, sink); });

    auto* surgery_cmd = app.add_subcommand("surgery", "derive a rewiring spec and apply it");
    std::string sur_path, sur_perm, sur_out;
    bool sur_pick = false;
    surgery_cmd->add_option("tower", sur_path, "tower file")->required();
    surgery_cmd->add_option("--perm", sur_perm, "permutation file")->required();
    surgery_cmd->add_flag("--pick", sur_pick, "choose the spec from the classifier report");
    surgery_cmd->add_option("-o,--out", sur_out, "save the rewired permutation here");
    add_common(surgery_cmd, sink);
    surgery_cmd->callback([&] { rc = run_surgery(sur_path, sur_perm, sur_pick, sur_out, sink); });

    auto* recover = app.add_subcommand("recover", "identify the branch word acting as a permutation");
    std::string rec_path, rec_perm;
    int rec_max = 2;
    recover->add_option("tower", rec_path, "tower file")->required();
    recover->add_option("--perm", rec_perm, "permutation file")->required();
    recover->add_option("--max-len", rec_max, "candidate word length bound");
    add_common(recover, sink);
    recover->callback([&] { rc = run_recover(rec_path, rec_perm, rec_max, sink); });

    auto* exp = app.add_subcommand("export", "tower summary as JSON");
    std::string exp_path, exp_out;
    exp->add_option("tower", exp_path, "tower file")->required();
    exp->add_option("-o,--out", exp_out, "output JSON file (default: stdout)");
    add_common(exp, sink);
    exp->callback([&] { rc = run_export(exp_path, exp_out, sink); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const ForgeError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return sink.flush(rc);
}
