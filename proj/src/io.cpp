#include "qm/io.hpp"
#include "qm/errors.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qm {

namespace {

constexpr long long kInt64Max = std::numeric_limits<long long>::max();
constexpr long long kInt64Min = std::numeric_limits<long long>::min();

void emit_count(std::ostringstream& os, const Int& m) {
    if (m <= kInt64Max && m >= kInt64Min)
        os << m;
    else
        os << '"' << m << '"';
}

Int count_from_json(const nlohmann::json& j) {
    if (j.is_string()) return Int(j.get<std::string>());
    if (j.is_number_integer()) return Int(j.get<long long>());
    throw MalformedCode("arrow count must be an integer or a decimal string");
}

std::string arrows_to_json(const Quiver& q) {
    std::ostringstream os;
    os << "[";
    bool first = true;
    for (const auto& [k, m] : q.entries()) {
        if (!first) os << ',';
        first = false;
        os << '[' << k.first << ',' << k.second << ',';
        emit_count(os, m);
        os << ']';
    }
    os << "]";
    return os.str();
}

Quiver arrows_from_json(const nlohmann::json& arr, bool allow_negative_vertices) {
    Quiver q;
    for (const auto& triple : arr) {
        if (!triple.is_array() || triple.size() != 3)
            throw MalformedCode("arrow entries must be [i, j, m] triples");
        Vertex i = triple[0].get<Vertex>();
        Vertex j = triple[1].get<Vertex>();
        if (i == j) throw MalformedCode("loops are excluded");
        if (!allow_negative_vertices && (i < 1 || j < 1))
            throw MalformedCode("vertices must be positive integers");
        if (i == 0 || j == 0) throw MalformedCode("vertex 0 is not a valid label");
        q.add(i, j, count_from_json(triple[2]));
    }
    return q;
}

} // namespace

std::string quiver_to_json(const Quiver& q) {
    return "{\"arrows\":" + arrows_to_json(q) + "}";
}

Quiver quiver_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    return arrows_from_json(j.at("arrows"), false);
}

std::string framed_to_json(const FramedQuiver& fq) {
    std::ostringstream os;
    os << "{\"arrows\":" << arrows_to_json(fq.base()) << ",\"mutable\":[";
    bool first = true;
    for (Vertex v : fq.mutables()) {
        if (!first) os << ',';
        first = false;
        os << v;
    }
    os << "]}";
    return os.str();
}

FramedQuiver framed_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    Quiver base = arrows_from_json(j.at("arrows"), true);
    VertexSet mutables;
    for (const auto& v : j.at("mutable")) {
        Vertex x = v.get<Vertex>();
        if (x < 1) throw MalformedCode("mutable vertices must be positive");
        mutables.insert(x);
    }
    return FramedQuiver(std::move(base), std::move(mutables));
}

std::string word_to_json(const Word& w) {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) os << ',';
        os << w[i];
    }
    os << ']';
    return os.str();
}

Word word_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    Word w;
    for (const auto& v : j) w.push_back(v.get<Vertex>());
    return w;
}

Word parse_word_arg(const std::string& text) {
    Word w;
    if (text.empty()) return w;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        w.push_back(std::stoi(item));
    }
    return w;
}

VertexSet parse_set_arg(const std::string& text) {
    Word w = parse_word_arg(text);
    return VertexSet(w.begin(), w.end());
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MalformedCode("cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw MalformedCode("cannot write " + path);
    out << content;
}

} // namespace qm
