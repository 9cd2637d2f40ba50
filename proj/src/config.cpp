#include "hfbem/config.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace hfbem {

namespace {

struct Entry {
    int line = 0;
    std::vector<std::string> tokens;
};

[[noreturn]] void fail(const std::string &name, int line,
                       const std::string &what) {
    std::ostringstream os;
    os << name << ":" << line << ": " << what;
    throw std::invalid_argument(os.str());
}

std::map<std::string, Entry> parse_entries(const std::string &text,
                                           const std::string &name) {
    std::map<std::string, Entry> entries;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const size_t hash = raw.find('#');
        if (hash != std::string::npos) {
            raw.erase(hash);
        }
        std::istringstream ls(raw);
        std::string key;
        if (!(ls >> key)) {
            continue;
        }
        std::string eq;
        if (!(ls >> eq) || eq != "=") {
            fail(name, lineno, "expected 'key = value'");
        }
        Entry e;
        e.line = lineno;
        std::string tok;
        while (ls >> tok) {
            e.tokens.push_back(tok);
        }
        if (e.tokens.empty()) {
            fail(name, lineno, "missing value for key '" + key + "'");
        }
        if (!entries.emplace(key, std::move(e)).second) {
            fail(name, lineno, "duplicate key '" + key + "'");
        }
    }
    return entries;
}

double to_double(const std::string &tok, const std::string &name, int line) {
    try {
        size_t used = 0;
        const double v = std::stod(tok, &used);
        if (used != tok.size()) {
            throw std::invalid_argument(tok);
        }
        return v;
    } catch (const std::exception &) {
        fail(name, line, "expected a number, got '" + tok + "'");
    }
}

int to_int(const std::string &tok, const std::string &name, int line) {
    int v = 0;
    const auto [p, ec] =
        std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size()) {
        fail(name, line, "expected an integer, got '" + tok + "'");
    }
    return v;
}

// Pulls one scalar value; throws on multi-token values.
const std::string &single(const Entry &e, const std::string &key,
                          const std::string &name) {
    if (e.tokens.size() != 1) {
        fail(name, e.line, "key '" + key + "' takes a single value");
    }
    return e.tokens.front();
}

class Reader {
  public:
    Reader(const std::string &text, const std::string &name)
        : name_(name), entries_(parse_entries(text, name)) {}

    bool has(const std::string &key) const { return entries_.count(key) > 0; }

    double number(const std::string &key) {
        const Entry &e = fetch(key);
        return to_double(single(e, key, name_), name_, e.line);
    }

    int integer(const std::string &key) {
        const Entry &e = fetch(key);
        return to_int(single(e, key, name_), name_, e.line);
    }

    std::string text(const std::string &key) {
        const Entry &e = fetch(key);
        return single(e, key, name_);
    }

    std::vector<double> numbers(const std::string &key) {
        const Entry &e = fetch(key);
        std::vector<double> out;
        for (const auto &tok : e.tokens) {
            out.push_back(to_double(tok, name_, e.line));
        }
        return out;
    }

    std::vector<int> integers(const std::string &key) {
        const Entry &e = fetch(key);
        std::vector<int> out;
        for (const auto &tok : e.tokens) {
            out.push_back(to_int(tok, name_, e.line));
        }
        return out;
    }

    int line_of(const std::string &key) const {
        const auto it = entries_.find(key);
        return it == entries_.end() ? 0 : it->second.line;
    }

    void require(const std::string &key) const {
        if (!has(key)) {
            throw std::invalid_argument(name_ + ": missing required key '" +
                                        key + "'");
        }
    }

    // Every key must have been consumed through fetch().
    void finish() const {
        for (const auto &[key, e] : entries_) {
            if (!used_.count(key)) {
                fail(name_, e.line, "unknown key '" + key + "'");
            }
        }
    }

  private:
    const Entry &fetch(const std::string &key) {
        require(key);
        used_.insert(key);
        return entries_.at(key);
    }

    std::string name_;
    std::map<std::string, Entry> entries_;
    std::set<std::string> used_;
};

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::invalid_argument("cannot open file: " + path);
    }
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

PartitionSpec parse_partition_text(const std::string &text,
                                   const std::string &name) {
    Reader r(text, name);
    r.require("mode");
    PartitionSpec spec;
    const std::string mode = r.text("mode");
    if (mode == "cov") {
        spec.mode = PartitionMode::cov;
    } else if (mode == "freq") {
        spec.mode = PartitionMode::freq_adapted;
    } else {
        fail(name, r.line_of("mode"),
             "mode must be 'cov' or 'freq', got '" + mode + "'");
    }

    spec.params.xi1 = r.number("xi1");
    spec.params.xi2 = r.number("xi2");
    spec.params.zeta1 = r.number("zeta1");
    spec.params.zeta2 = r.number("zeta2");

    if (spec.mode == PartitionMode::cov) {
        spec.J = r.integer("J");
        if (spec.J != 6 && spec.J != 8) {
            fail(name, r.line_of("J"), "J must be 6 or 8");
        }
        spec.params.xi1p = r.number("xi1p");
        spec.params.xi2p = r.number("xi2p");
        spec.params.zeta1p = r.number("zeta1p");
        spec.params.zeta2p = r.number("zeta2p");
    } else {
        spec.m = r.integer("m");
        if (spec.m < 1) {
            fail(name, r.line_of("m"), "m must be at least 1");
        }
        if (r.has("eps")) {
            spec.eps = r.numbers("eps");
        }
    }
    if (r.has("degrees")) {
        spec.degrees = r.integers("degrees");
        for (const int d : spec.degrees) {
            if (d < 0) {
                fail(name, r.line_of("degrees"), "degrees must be >= 0");
            }
        }
    }
    r.finish();
    return spec;
}

PartitionSpec parse_partition_file(const std::string &path) {
    return parse_partition_text(read_file(path), path);
}

void write_partition_file(const std::string &path, const PartitionSpec &spec) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::invalid_argument("cannot open output file: " + path);
    }
    if (spec.mode == PartitionMode::cov) {
        out << "mode = cov\n";
        out << "J = " << spec.J << "\n";
    } else {
        out << "mode = freq\n";
        out << "m = " << spec.m << "\n";
    }
    const CovParams &p = spec.params;
    out << "xi1 = " << fmt17(p.xi1) << "\n";
    out << "xi2 = " << fmt17(p.xi2) << "\n";
    out << "zeta1 = " << fmt17(p.zeta1) << "\n";
    out << "zeta2 = " << fmt17(p.zeta2) << "\n";
    if (spec.mode == PartitionMode::cov) {
        out << "xi1p = " << fmt17(p.xi1p) << "\n";
        out << "xi2p = " << fmt17(p.xi2p) << "\n";
        out << "zeta1p = " << fmt17(p.zeta1p) << "\n";
        out << "zeta2p = " << fmt17(p.zeta2p) << "\n";
    }
    if (spec.mode == PartitionMode::freq_adapted && !spec.eps.empty()) {
        out << "eps =";
        for (const double e : spec.eps) {
            out << " " << fmt17(e);
        }
        out << "\n";
    }
    if (!spec.degrees.empty()) {
        out << "degrees =";
        for (const int d : spec.degrees) {
            out << " " << d;
        }
        out << "\n";
    }
    if (!out) {
        throw std::invalid_argument("failed writing file: " + path);
    }
}

ExperimentConfig parse_experiment_text(const std::string &text,
                                       const std::string &name) {
    Reader r(text, name);
    r.require("geometry");
    r.require("k");

    ExperimentConfig ec;
    const std::string geom = r.text("geometry");
    if (geom == "circle") {
        ec.geometry = CurveKind::circle;
    } else if (geom == "ellipse") {
        ec.geometry = CurveKind::ellipse;
    } else if (geom == "kite") {
        ec.geometry = CurveKind::kite;
    } else {
        fail(name, r.line_of("geometry"),
             "geometry must be circle, ellipse, or kite; got '" + geom + "'");
    }
    if (r.has("radius")) {
        ec.shape.radius = r.number("radius");
    }
    if (r.has("a")) {
        ec.shape.a = r.number("a");
    }
    if (r.has("b")) {
        ec.shape.b = r.number("b");
    }
    if (r.has("alpha")) {
        const std::vector<double> a = r.numbers("alpha");
        if (a.size() != 2) {
            fail(name, r.line_of("alpha"), "alpha takes two numbers");
        }
        ec.alpha = Vec2(a[0], a[1]);
        if (!(ec.alpha.norm() > 0.0)) {
            fail(name, r.line_of("alpha"), "alpha must be nonzero");
        }
    }
    ec.ks = r.numbers("k");
    for (const double k : ec.ks) {
        if (!(k > 0.0)) {
            fail(name, r.line_of("k"), "wavenumbers must be positive");
        }
    }
    if (r.has("family")) {
        ec.family = r.text("family");
    }
    if (ec.family != "alg-cov" && ec.family != "trig-cov" &&
        ec.family != "alg-freq" && ec.family != "trig-freq") {
        fail(name, r.has("family") ? r.line_of("family") : 0,
             "family must be one of alg-cov, trig-cov, alg-freq, trig-freq");
    }
    if (r.has("J")) {
        ec.J = r.integer("J");
        if (ec.J != 6 && ec.J != 8) {
            fail(name, r.line_of("J"), "J must be 6 or 8");
        }
    }
    if (r.has("m")) {
        ec.m = r.integer("m");
        if (ec.m < 1) {
            fail(name, r.line_of("m"), "m must be at least 1");
        }
    }
    if (r.has("degrees")) {
        ec.degrees = r.integers("degrees");
        for (const int d : ec.degrees) {
            if (d < 0) {
                fail(name, r.line_of("degrees"), "degrees must be >= 0");
            }
        }
    }
    if (r.has("ppw")) {
        ec.ppw = r.integer("ppw");
        if (ec.ppw < 6) {
            fail(name, r.line_of("ppw"), "ppw must be at least 6");
        }
    }
    if (r.has("params")) {
        ec.params_path = r.text("params");
    }
    if (r.has("out")) {
        ec.out_path = r.text("out");
    }
    if (r.has("tune_rounds")) {
        ec.tune_rounds = r.integer("tune_rounds");
    }
    if (r.has("tune_steps")) {
        ec.tune_steps = r.integer("tune_steps");
    }
    if (r.has("tune_d")) {
        ec.tune_d = r.integer("tune_d");
    }
    r.finish();
    return ec;
}

ExperimentConfig parse_experiment_file(const std::string &path) {
    return parse_experiment_text(read_file(path), path);
}

namespace {

std::vector<std::string> split_list(const std::string &text) {
    std::vector<std::string> toks;
    std::string cur;
    for (const char c : text) {
        if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
            if (!cur.empty()) {
                toks.push_back(cur);
                cur.clear();
            }
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) {
        toks.push_back(cur);
    }
    if (toks.empty()) {
        throw std::invalid_argument("empty list: '" + text + "'");
    }
    return toks;
}

} // namespace

std::vector<double> parse_double_list(const std::string &text) {
    std::vector<double> out;
    for (const auto &tok : split_list(text)) {
        out.push_back(to_double(tok, "list", 0));
    }
    return out;
}

std::vector<int> parse_int_list(const std::string &text) {
    std::vector<int> out;
    for (const auto &tok : split_list(text)) {
        out.push_back(to_int(tok, "list", 0));
    }
    return out;
}

} // namespace hfbem
