#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "forge/errors.hpp"
#include "forge/tower.hpp"

namespace forge {

namespace {

void append_num(std::string& out, uint64_t v) {
    char buf[24];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, end);
}

struct LineReader {
    std::istream& in;
    size_t lineno = 0;
    std::string line;

    bool next() {
        while (std::getline(in, line)) {
            ++lineno;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (!line.empty()) return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError("line " + std::to_string(lineno) + ": " + what);
    }
};

std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream iss(s);
    std::string tok;
    while (iss >> tok) out.push_back(tok);
    return out;
}

uint64_t parse_u64(const LineReader& r, const std::string& tok) {
    uint64_t v = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || p != tok.data() + tok.size()) {
        r.fail("expected a number, got '" + tok + "'");
    }
    return v;
}

uint64_t parse_kv(const LineReader& r, const std::string& tok, const std::string& key) {
    if (tok.rfind(key + "=", 0) != 0) r.fail("expected " + key + "=..., got '" + tok + "'");
    return parse_u64(r, tok.substr(key.size() + 1));
}

// Numeric tail of a GEN/ASET line, parsed in one pass.
std::vector<uint32_t> parse_tail(const LineReader& r, const std::string& line, size_t from) {
    std::vector<uint32_t> out;
    const char* p = line.data() + from;
    const char* end = line.data() + line.size();
    while (p < end) {
        while (p < end && *p == ' ') ++p;
        if (p == end) break;
        uint32_t v = 0;
        auto [q, ec] = std::from_chars(p, end, v);
        if (ec != std::errc{} || q == p) r.fail("bad number in table");
        out.push_back(v);
        p = q;
    }
    return out;
}

} // namespace

void save_tower(const Tower& t, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot open '" + path + "' for writing");

    std::string buf;
    buf.reserve(1 << 20);
    buf += "TOWER v1 depth=";
    append_num(buf, static_cast<uint64_t>(t.depth));
    buf += " profile=" + profile_name(t.schedule.profile);
    buf += " lambda=";
    append_num(buf, t.schedule.lambda);
    buf += " beta=";
    append_num(buf, t.schedule.beta);
    buf += " seed=";
    append_num(buf, t.seed);
    buf += '\n';

    for (const TowerLevel& L : t.levels) {
        if (L.lsep != std::min(L.node.lg(), 2)) {
            throw Unreachable("tower with nonstandard separation horizon cannot be saved");
        }
        buf += "NODE " + node_str(L.node) + " size=";
        append_num(buf, L.size);
        buf += " base=";
        append_num(buf, L.global_base);
        buf += '\n';
        std::vector<Node> nus = nodes_of_length(L.node.lg());
        for (size_t i = 0; i < nus.size(); ++i) {
            buf += "GEN " + node_str(nus[i]);
            for (uint32_t v : L.f[i]) {
                buf += ' ';
                append_num(buf, v);
            }
            buf += '\n';
            out << buf;
            buf.clear();
        }
        for (size_t i = 0; i < nus.size(); ++i) {
            buf += "ASET " + node_str(nus[i]);
            for (uint32_t v : L.A[i]) {
                buf += ' ';
                append_num(buf, v);
            }
            buf += '\n';
        }
        buf += "CERT " + L.cert.method + ' ';
        append_num(buf, L.cert.param);
        buf += ' ';
        append_num(buf, L.cert.seed);
        buf += '\n';
        out << buf;
        buf.clear();
    }
    if (!out) throw ParseError("write to '" + path + "' failed");
}

Tower load_tower(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    LineReader r{in};

    if (!r.next()) r.fail("empty file");
    auto head = split(r.line);
    if (head.size() != 7 || head[0] != "TOWER" || head[1] != "v1") {
        r.fail("expected TOWER v1 header");
    }
    Tower t;
    t.depth = static_cast<int>(parse_kv(r, head[2], "depth"));
    if (head[3].rfind("profile=", 0) != 0) r.fail("expected profile=...");
    t.schedule.profile = parse_profile(head[3].substr(8));
    t.schedule.lambda = parse_kv(r, head[4], "lambda");
    t.schedule.beta = parse_kv(r, head[5], "beta");
    t.seed = parse_kv(r, head[6], "seed");

    uint64_t base = 0;
    bool pending = r.next();
    while (pending) {
        auto toks = split(r.line);
        if (toks.empty() || toks[0] != "NODE") r.fail("expected NODE line");
        if (toks.size() != 4) r.fail("malformed NODE line");
        TowerLevel L;
        L.node = parse_node(toks[1]);
        for (const TowerLevel& prev : t.levels) {
            if (prev.node == L.node) r.fail("duplicate node " + toks[1]);
        }
        L.size = parse_kv(r, toks[2], "size");
        if (L.size == 0) r.fail("empty block");
        L.global_base = parse_kv(r, toks[3], "base");
        if (L.global_base != base) r.fail("node base out of sequence");

        std::vector<Node> nus = nodes_of_length(L.node.lg());
        for (const Node& nu : nus) {
            if (!r.next()) r.fail("missing GEN line");
            if (r.line.rfind("GEN ", 0) != 0) r.fail("expected GEN line");
            size_t sp = r.line.find(' ', 4);
            if (sp == std::string::npos) r.fail("malformed GEN line");
            if (!(parse_node(r.line.substr(4, sp - 4)) == nu)) {
                r.fail("GEN lines out of order, expected " + node_str(nu));
            }
            Perm p = parse_tail(r, r.line, sp + 1);
            if (p.size() != L.size) r.fail("GEN table has wrong length");
            if (!is_permutation(p)) r.fail("GEN table is not a permutation");
            L.f_inv.push_back(inverse_perm(p));
            L.f.push_back(std::move(p));
        }
        std::vector<char> marked(L.size, 0);
        for (const Node& nu : nus) {
            if (!r.next()) r.fail("missing ASET line");
            if (r.line.rfind("ASET ", 0) != 0) r.fail("expected ASET line");
            size_t sp = r.line.find(' ', 5);
            if (sp == std::string::npos) r.fail("malformed ASET line");
            if (!(parse_node(r.line.substr(5, sp - 5)) == nu)) {
                r.fail("ASET lines out of order, expected " + node_str(nu));
            }
            std::vector<uint32_t> set = parse_tail(r, r.line, sp + 1);
            for (uint32_t a : set) {
                if (a >= L.size) r.fail("marked element out of range");
                if (marked[a]) r.fail("marked sets overlap");
                marked[a] = 1;
            }
            L.A.push_back(std::move(set));
        }
        if (!r.next()) r.fail("missing CERT line");
        auto cert = split(r.line);
        if (cert.size() != 4 || cert[0] != "CERT") r.fail("expected CERT line");
        L.cert.method = cert[1];
        L.cert.param = parse_u64(r, cert[2]);
        L.cert.seed = parse_u64(r, cert[3]);

        uint64_t anc = ancestor_chain_sum(t, L.node);
        L.n1 = n1_for(t.schedule, L.node.lg(), anc);
        L.n0 = n0_for(L.n1, L.node.lg());
        L.lsep = std::min(L.node.lg(), 2);
        base += L.size;
        t.levels.push_back(std::move(L));
        pending = r.next();
    }
    t.universe_size = base;
    if (t.levels.empty()) throw ParseError("tower has no levels");
    return t;
}

std::string tower_to_json(const Tower& t) {
    nlohmann::json j;
    j["depth"] = t.depth;
    j["profile"] = profile_name(t.schedule.profile);
    j["lambda"] = t.schedule.lambda;
    j["beta"] = t.schedule.beta;
    j["seed"] = t.seed;
    j["universe_size"] = t.universe_size;
    j["levels"] = nlohmann::json::array();
    for (const TowerLevel& L : t.levels) {
        nlohmann::json lv;
        lv["node"] = node_str(L.node);
        lv["size"] = L.size;
        lv["base"] = L.global_base;
        lv["n1"] = L.n1;
        lv["n0"] = L.n0;
        lv["lsep"] = L.lsep;
        lv["cert"] = {{"method", L.cert.method}, {"param", L.cert.param}, {"seed", L.cert.seed}};
        nlohmann::json sizes = nlohmann::json::array();
        for (const auto& set : L.A) sizes.push_back(set.size());
        lv["marked_sizes"] = sizes;
        j["levels"].push_back(lv);
    }
    return j.dump(2);
}

} // namespace forge
