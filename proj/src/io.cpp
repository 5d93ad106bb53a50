#include "hypcap/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "hypcap/errors.hpp"

namespace hypcap {

using nlohmann::json;

namespace {

json complexJson(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complexFrom(const json& j, const std::string& what) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ConfigError(what + ": expected [x, y]");
    return {j[0].get<double>(), j[1].get<double>()};
}

json matrixJson(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

Constellation parseConstellation(const json& j) {
    if (!j.is_object()) throw ConfigError("constellation: top level must be an object");
    const std::string geometry = j.value("geometry", std::string("hyperbolic"));
    if (geometry != "hyperbolic" && geometry != "euclidean")
        throw ConfigError("constellation: geometry must be \"hyperbolic\" or \"euclidean\", got \"" + geometry + "\"");
    Constellation c;
    if (j.contains("delta")) {
        if (!j["delta"].is_number()) throw ConfigError("constellation: delta must be a number");
        c.delta = j["delta"].get<double>();
        if (!(c.delta >= 0.0)) throw ConfigError("constellation: delta must be nonnegative");
    }
    if (!j.contains("disks") || !j["disks"].is_array() || j["disks"].empty())
        throw ConfigError("constellation: \"disks\" must be a nonempty array");
    int k = 0;
    for (const auto& d : j["disks"]) {
        const std::string where = "constellation: disk " + std::to_string(k++);
        if (!d.is_object() || !d.contains("center") || !d.contains("radius"))
            throw ConfigError(where + ": expected {\"center\":[x,y],\"radius\":r}");
        const cplx z = complexFrom(d["center"], where + " center");
        if (!d["radius"].is_number()) throw ConfigError(where + ": radius must be a number");
        const double r = d["radius"].get<double>();
        if (!(r > 0.0)) throw DomainError(where + ": radius must be positive");
        if (!(std::abs(z) < 1.0)) throw DomainError(where + ": center must lie inside the unit disk");
        if (geometry == "euclidean") {
            if (!(std::abs(z) + r < 1.0)) throw DomainError(where + ": disk must lie inside the unit disk");
            c.disks.push_back(eucToHyp(EucDisk{z, r}));
        } else {
            c.disks.push_back({z, r});
        }
    }
    const auto rep = validate(c);
    if (!rep.feasible()) throw InfeasibleError("constellation: " + rep.describe());
    return c;
}

Constellation parseConstellation(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("constellation: malformed JSON: ") + e.what());
    }
    return parseConstellation(j);
}

Constellation loadConstellation(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parseConstellation(ss.str());
}

json toJson(const Constellation& c) {
    json disks = json::array();
    for (const auto& d : c.disks) disks.push_back({{"center", complexJson(d.center)}, {"radius", d.radius}});
    return {{"geometry", "hyperbolic"}, {"delta", c.delta}, {"disks", disks}};
}

json toJson(const CapacityResult& r) {
    return {{"cap", r.cap},
            {"a", std::vector<double>(r.a.data(), r.a.data() + r.a.size())},
            {"c", r.c},
            {"diagnostics",
             {{"n", r.n},
              {"alpha", complexJson(r.alpha)},
              {"mode", toString(r.mode)},
              {"iterations", r.iterations},
              {"residual", r.residual},
              {"h", matrixJson(r.h)},
              {"hStd", matrixJson(r.hStd)},
              {"maxHStd", r.hStd.size() ? r.hStd.maxCoeff() : 0.0}}}};
}

json toJson(const OptimizationResult& r) {
    return {{"cap", r.cap},
            {"configuration", toJson(r.configuration)},
            {"status", toString(r.status)},
            {"iterations", r.iterations},
            {"evaluations", r.evaluations},
            {"kktResidual", r.kktResidual},
            {"minMargin", r.minMargin},
            {"fdFallbacks", r.fdFallbacks}};
}

json metadata(const SolverConfig& cfg, double delta) {
    json alpha = cfg.alpha ? complexJson(*cfg.alpha) : json("auto");
    return {{"n", cfg.n}, {"alpha", alpha}, {"mode", toString(cfg.mode)}, {"delta", delta}, {"version", version}};
}

std::string formatCell(const Cell& c) {
    struct Visitor {
        std::string operator()(std::monostate) const { return {}; }
        std::string operator()(double v) const {
            char buf[64];
            const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
            return std::string(buf, res.ptr);
        }
        std::string operator()(long long v) const { return std::to_string(v); }
        std::string operator()(const std::string& s) const {
            if (s.find_first_of(",\"\n") == std::string::npos) return s;
            std::string q = "\"";
            for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
            return q + "\"";
        }
    };
    return std::visit(Visitor{}, c);
}

std::string formatTable(const Table& t) {
    std::string out;
    for (std::size_t i = 0; i < t.header.size(); ++i) out += (i ? "," : "") + formatCell(t.header[i]);
    out += '\n';
    for (const auto& row : t.rows) {
        if (row.size() != t.header.size()) throw ConfigError("writeTable: row width differs from the header");
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + formatCell(row[i]);
        out += '\n';
    }
    return out;
}

void writeText(const std::string& text, const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

void writeTable(const Table& t, const std::filesystem::path& path) { writeText(formatTable(t), path); }

namespace {

std::vector<std::string> splitCsvLine(const std::string& line) {
    std::vector<std::string> fields(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                fields.back() += '"';
                ++i;
            } else if (ch == '"') {
                quoted = false;
            } else {
                fields.back() += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            fields.emplace_back();
        } else {
            fields.back() += ch;
        }
    }
    return fields;
}

Cell parseCell(const std::string& s) {
    if (s.empty()) return std::monostate{};
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec == std::errc() && res.ptr == s.data() + s.size()) return v;
    return s;
}

}  // namespace

Table parseTable(const std::string& text) {
    Table t;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        auto fields = splitCsvLine(line);
        if (first) {
            t.header = std::move(fields);
            first = false;
            continue;
        }
        std::vector<Cell> row;
        for (const auto& f : fields) row.push_back(parseCell(f));
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table readTable(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parseTable(ss.str());
}

}  // namespace hypcap
