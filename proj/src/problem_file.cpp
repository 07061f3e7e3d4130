#include "voltau/problem_file.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace voltau {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

// strips an optional matching pair of double quotes
std::string unquote(const std::string& s, int line) {
    if (s.size() >= 2 && s.front() == '"') {
        if (s.back() != '"') throw ProblemFileError(line, "unterminated quoted value");
        return s.substr(1, s.size() - 2);
    }
    return s;
}

}  // namespace

ProblemFile parse_problem_text(const std::string& text) {
    std::map<std::string, std::pair<std::string, int>> kv;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        // comments start at an unquoted '#'
        bool quoted = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') quoted = !quoted;
            if (line[i] == '#' && !quoted) {
                line = line.substr(0, i);
                break;
            }
        }
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ProblemFileError(lineno, "expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = unquote(trim(line.substr(eq + 1)), lineno);
        if (key.empty()) throw ProblemFileError(lineno, "empty key");
        if (kv.count(key)) throw ProblemFileError(lineno, "duplicate key '" + key + "'");
        kv[key] = {value, lineno};
    }

    auto take = [&kv](const std::string& key) -> std::optional<std::pair<std::string, int>> {
        auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        auto out = it->second;
        kv.erase(it);
        return out;
    };

    ProblemFile pf;
    auto gamma = take("gamma");
    auto beta = take("beta");
    auto H = take("H");
    if (!gamma) throw ProblemFileError(0, "missing required key 'gamma'");
    if (!beta) throw ProblemFileError(0, "missing required key 'beta'");
    if (!H) throw ProblemFileError(0, "missing required key 'H'");

    try {
        pf.spec.gamma = parse_rational(gamma->first);
    } catch (const std::exception& e) {
        throw ProblemFileError(gamma->second, std::string("bad gamma: ") + e.what());
    }
    try {
        pf.spec.beta = parse_rational(beta->first);
    } catch (const std::exception& e) {
        throw ProblemFileError(beta->second, std::string("bad beta: ") + e.what());
    }
    try {
        pf.spec.H = exprlang::parse(H->first, "ts");
    } catch (const exprlang::ParseError& e) {
        throw ProblemFileError(H->second, std::string("bad H: ") + e.what());
    }

    if (auto g = take("g")) {
        try {
            pf.spec.g = exprlang::parse(g->first, "t");
        } catch (const exprlang::ParseError& e) {
            throw ProblemFileError(g->second, std::string("bad g: ") + e.what());
        }
    }
    if (auto y = take("exact_y")) {
        try {
            pf.spec.exact_y = exprlang::parse(y->first, "t");
        } catch (const exprlang::ParseError& e) {
            throw ProblemFileError(y->second, std::string("bad exact_y: ") + e.what());
        }
    }
    if (auto m = take("manufacture")) {
        if (m->first == "true")
            pf.spec.manufacture = true;
        else if (m->first == "false")
            pf.spec.manufacture = false;
        else
            throw ProblemFileError(m->second, "manufacture must be true or false");
    }
    if (auto a = take("alpha_den_override")) {
        try {
            pf.alpha_den_override = std::stoll(a->first);
        } catch (const std::exception&) {
            throw ProblemFileError(a->second, "alpha_den_override must be an integer");
        }
    }
    if (auto p = take("precision")) {
        try {
            long v = std::stol(p->first);
            if (v < 15) throw std::out_of_range("too small");
            pf.precision = static_cast<unsigned>(v);
        } catch (const std::exception&) {
            throw ProblemFileError(p->second, "precision must be an integer >= 15");
        }
    }
    if (!kv.empty())
        throw ProblemFileError(kv.begin()->second.second,
                               "unknown key '" + kv.begin()->first + "'");

    try {
        pf.spec.validate();
    } catch (const std::exception& e) {
        throw ProblemFileError(0, e.what());
    }
    return pf;
}

ProblemFile load_problem_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open problem file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_problem_text(buf.str());
}

}  // namespace voltau
