#include "bell/bundle.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace bell {

std::string write_bundle(const IterationInput& in) {
    std::ostringstream os;
    os << "# constraints " << (check_constraints(in) ? "satisfied" : "violated") << "\n";
    os << "formula general\n";
    for (std::size_t i = 0; i < in.keys.size(); ++i) {
        os << "piece " << sign_label(in.keys[i]) << "\n" << render(in.pieces[i]) << "end\n";
    }
    return os.str();
}

IterationSpec read_spec(std::istream& in, const std::filesystem::path& base_dir) {
    IterationSpec spec;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::istringstream ls(raw);
        std::string word;
        if (!(ls >> word) || word[0] == '#') continue;
        if (word == "formula") {
            if (!(ls >> spec.formula)) throw ParseError(line, "formula needs a name");
            if (spec.formula != "general" && spec.formula != "2m" && spec.formula != "sym" && spec.formula != "3m")
                throw ParseError(line, "unknown formula '" + spec.formula + "'");
        } else if (word == "piece") {
            std::string label, path;
            if (!(ls >> label)) throw ParseError(line, "piece needs a sign vector");
            try {
                parse_sign_label(label);
            } catch (const std::invalid_argument& e) {
                throw ParseError(line, e.what());
            }
            for (auto& [l, f] : spec.pieces)
                if (l == label) throw ParseError(line, "duplicate piece " + label);
            if (ls >> path) {
                std::filesystem::path p = path;
                if (p.is_relative()) p = base_dir / p;
                std::ifstream f(p);
                if (!f) throw ParseError(line, "cannot open " + p.string());
                int inner = 0;
                try {
                    spec.pieces.emplace_back(label, read_functional(f, inner));
                } catch (const ParseError& e) {
                    throw ParseError(line, p.string() + ": " + e.what());
                }
            } else {
                spec.pieces.emplace_back(label, read_functional(in, line));
            }
        } else {
            throw ParseError(line, "expected 'formula' or 'piece', got '" + word + "'");
        }
    }
    if (spec.pieces.empty()) throw ParseError(line, "no pieces given");
    return spec;
}

Functional build(const IterationSpec& spec) {
    std::map<std::string, Functional> by;
    for (auto& [l, f] : spec.pieces) by.emplace(l, f);
    auto need = [&](const std::vector<std::string>& labels) {
        for (auto& [l, f] : by) {
            bool known = false;
            for (auto& x : labels) known = known || x == l;
            if (!known) throw std::invalid_argument("formula " + spec.formula + " does not take piece " + l);
        }
        std::vector<Functional> out;
        for (auto& l : labels) {
            auto it = by.find(l);
            if (it == by.end()) throw std::invalid_argument("formula " + spec.formula + " needs piece " + l);
            out.push_back(it->second);
        }
        return out;
    };
    if (spec.formula == "sym") {
        auto p = need({"++", "+-"});
        return iterate_sym(p[0], p[1]);
    }
    if (spec.formula == "2m") {
        auto p = need({"++", "+-", "-+"});
        return iterate_2m(p[0], p[1], p[2]);
    }
    if (spec.formula == "3m") {
        auto p = need({"+++", "++-", "+-+", "---"});
        return iterate_3m(p[0], p[1], p[2], p[3]);
    }
    const int m = static_cast<int>(spec.pieces.front().first.size());
    std::vector<std::string> labels;
    for (auto& s : sign_vectors(m)) labels.push_back(sign_label(s));
    auto p = need(labels);
    return iterate(make_input(p));
}

}  // namespace bell
