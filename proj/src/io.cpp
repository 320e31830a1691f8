#include "eckart/io.hpp"

#include <json.hpp>

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace eckart::io {

namespace {

using nlohmann::json;

// Maps every JSON path ("nuclei[1].mass") of an already valid document to the
// line its value starts on.
std::map<std::string, int> value_lines(const std::string& text) {
    struct Frame {
        bool array;
        std::string path;
        std::size_t index = 0;
        std::string key;
        bool expect_key = true;
    };
    std::map<std::string, int> lines;
    std::vector<Frame> stack;
    int line = 1;
    const auto child_path = [&stack]() -> std::string {
        if (stack.empty()) {
            return "";
        }
        const Frame& top = stack.back();
        if (top.array) {
            return top.path + "[" + std::to_string(top.index) + "]";
        }
        return top.path.empty() ? top.key : top.path + "." + top.key;
    };
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (c == '\n') {
            ++line;
        } else if (c == '{' || c == '[') {
            const std::string path = child_path();
            lines.emplace(path, line);
            stack.push_back(Frame{c == '[', path, 0, "", true});
        } else if (c == '}' || c == ']') {
            if (!stack.empty()) {
                stack.pop_back();
            }
        } else if (c == ',') {
            if (!stack.empty()) {
                if (stack.back().array) {
                    ++stack.back().index;
                } else {
                    stack.back().expect_key = true;
                }
            }
        } else if (c == '"') {
            std::string s;
            for (++i; i < text.size() && text[i] != '"'; ++i) {
                if (text[i] == '\\' && i + 1 < text.size()) {
                    ++i;
                }
                s.push_back(text[i]);
            }
            if (!stack.empty() && !stack.back().array && stack.back().expect_key) {
                stack.back().key = s;
                stack.back().expect_key = false;
            } else {
                lines.emplace(child_path(), line);
            }
        } else if (c == '-' || c == '+' || c == '.' || std::isalnum(static_cast<unsigned char>(c))) {
            lines.emplace(child_path(), line);
            while (i + 1 < text.size() && text[i + 1] != ',' && text[i + 1] != '}' && text[i + 1] != ']' &&
                   !std::isspace(static_cast<unsigned char>(text[i + 1]))) {
                ++i;
            }
        }
    }
    return lines;
}

class SchemaReader {
public:
    SchemaReader(const std::string& text, std::string source) : lines_(value_lines(text)), source_(std::move(source)) {}

    [[noreturn]] void fail(const std::string& path, const std::string& message) const {
        std::string p = path;
        auto it = lines_.find(p);
        while (it == lines_.end() && !p.empty()) {
            const auto cut = p.find_last_of(".[");
            p = cut == std::string::npos ? "" : p.substr(0, cut);
            it = lines_.find(p);
        }
        std::ostringstream msg;
        msg << source_;
        if (it != lines_.end()) {
            msg << ":" << it->second;
        }
        msg << ": " << (path.empty() ? "document" : path) << ": " << message;
        throw InputError(msg.str());
    }

    static std::string join(const std::string& base, const std::string& key) {
        return base.empty() ? key : base + "." + key;
    }
    static std::string index(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }

    const json& field(const json& obj, const std::string& path, const std::string& key) const {
        if (!obj.contains(key)) {
            fail(path, "missing required field '" + key + "'");
        }
        return obj.at(key);
    }

    void only_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) const {
        for (const auto& item : obj.items()) {
            bool known = false;
            for (const char* k : allowed) {
                known = known || item.key() == k;
            }
            if (!known) {
                fail(join(path, item.key()), "unknown field '" + item.key() + "'");
            }
        }
    }

    double number(const json& v, const std::string& path) const {
        if (!v.is_number()) {
            fail(path, "expected a number");
        }
        return v.get<double>();
    }

    const json& object(const json& v, const std::string& path) const {
        if (!v.is_object()) {
            fail(path, "expected an object");
        }
        return v;
    }

    const json& array(const json& v, const std::string& path) const {
        if (!v.is_array()) {
            fail(path, "expected an array");
        }
        return v;
    }

    std::vector<double> numbers(const json& v, const std::string& path, std::size_t expected) const {
        array(v, path);
        if (v.size() != expected) {
            fail(path, "expected " + std::to_string(expected) + " numbers, got " + std::to_string(v.size()));
        }
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            out.push_back(number(v[i], index(path, i)));
        }
        return out;
    }

private:
    std::map<std::string, int> lines_;
    std::string source_;
};

double parse_number(std::string_view token, const std::string& where) {
    double value = 0.0;
    const auto* begin = token.data();
    const auto* end = token.data() + token.size();
    if (!token.empty() && *begin == '+') {
        ++begin;
    }
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
        throw InputError(where + ": expected a number, got '" + std::string(token) + "'");
    }
    return value;
}

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
        }
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) {
            ++j;
        }
        if (j > i) {
            out.push_back(line.substr(i, j - i));
        }
        i = j;
    }
    return out;
}

bool blank(std::string_view line) { return split_ws(line).empty(); }

json cell_json(const Cell& cell) {
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) {
                return nullptr;
            } else {
                return json(v);
            }
        },
        cell);
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out.push_back('"');
        }
        out.push_back(c);
    }
    return out + "\"";
}

std::string cell_text(const Cell& cell) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) {
                return "";
            } else if constexpr (std::is_same_v<T, double>) {
                return format_double(v);
            } else if constexpr (std::is_same_v<T, std::int64_t>) {
                return std::to_string(v);
            } else if constexpr (std::is_same_v<T, std::string>) {
                return csv_escape(v);
            } else if constexpr (std::is_same_v<T, bool>) {
                return v ? "true" : "false";
            } else {
                return "";
            }
        },
        cell);
}

}  // namespace

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot open '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

MoleculeFile parse_molecule(const std::string& text, const std::string& source) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(source + ": malformed JSON: " + e.what());
    }
    const SchemaReader r(text, source);
    r.object(doc, "");
    r.only_keys(doc, "", {"name", "hbar", "nuclei", "electrons", "modes", "hessian"});

    const json& name = r.field(doc, "", "name");
    if (!name.is_string()) {
        r.fail("name", "expected a string");
    }
    const double hbar = doc.contains("hbar") ? r.number(doc["hbar"], "hbar") : 1.0;

    const json& nuclei_json = r.array(r.field(doc, "", "nuclei"), "nuclei");
    std::vector<Nucleus> nuclei;
    for (std::size_t i = 0; i < nuclei_json.size(); ++i) {
        const std::string path = SchemaReader::index("nuclei", i);
        const json& n = r.object(nuclei_json[i], path);
        r.only_keys(n, path, {"mass", "position"});
        Nucleus nucleus;
        nucleus.mass = r.number(r.field(n, path, "mass"), SchemaReader::join(path, "mass"));
        const auto pos = r.numbers(r.field(n, path, "position"), SchemaReader::join(path, "position"), 3);
        nucleus.position = Vec3(pos[0], pos[1], pos[2]);
        nuclei.push_back(nucleus);
    }

    int electron_count = 0;
    double electron_mass = 1.0;
    if (doc.contains("electrons")) {
        const json& e = r.object(doc["electrons"], "electrons");
        r.only_keys(e, "electrons", {"count", "mass"});
        const json& count = r.field(e, "electrons", "count");
        if (!count.is_number_integer() || count.get<std::int64_t>() < 0 || count.get<std::int64_t>() > 100000) {
            r.fail("electrons.count", "expected a non-negative integer");
        }
        electron_count = count.get<int>();
        if (e.contains("mass")) {
            electron_mass = r.number(e["mass"], "electrons.mass");
        }
    }

    std::optional<Molecule> mol;
    try {
        mol.emplace(name.get<std::string>(), std::move(nuclei), electron_count, electron_mass, hbar);
    } catch (const InputError& err) {
        throw InputError(source + ": " + err.what());
    }

    MoleculeFile file{*mol, std::nullopt, std::nullopt};
    const std::size_t dim = 3 * mol->nucleus_count();
    if (doc.contains("modes") && doc.contains("hessian")) {
        r.fail("hessian", "give either 'modes' or 'hessian', not both");
    }
    if (doc.contains("modes")) {
        const json& modes = r.array(doc["modes"], "modes");
        if (modes.size() != mol->mode_count()) {
            r.fail("modes", "expected " + std::to_string(mol->mode_count()) + " mode vectors, got " +
                                std::to_string(modes.size()));
        }
        MatX x(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(modes.size()));
        for (std::size_t a = 0; a < modes.size(); ++a) {
            const auto v = r.numbers(modes[a], SchemaReader::index("modes", a), dim);
            for (std::size_t i = 0; i < dim; ++i) {
                x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(a)) = v[i];
            }
        }
        file.modes = std::move(x);
    }
    if (doc.contains("hessian")) {
        const json& h = r.array(doc["hessian"], "hessian");
        MatX m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
        if (!h.empty() && h[0].is_array()) {
            if (h.size() != dim) {
                r.fail("hessian", "expected " + std::to_string(dim) + " rows, got " + std::to_string(h.size()));
            }
            for (std::size_t i = 0; i < dim; ++i) {
                const auto row = r.numbers(h[i], SchemaReader::index("hessian", i), dim);
                for (std::size_t j = 0; j < dim; ++j) {
                    m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = row[j];
                }
            }
        } else {
            const auto flat = r.numbers(h, "hessian", dim * dim);
            for (std::size_t i = 0; i < dim; ++i) {
                for (std::size_t j = 0; j < dim; ++j) {
                    m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = flat[i * dim + j];
                }
            }
        }
        file.hessian = std::move(m);
    }
    return file;
}

MoleculeFile load_molecule(const std::string& path) { return parse_molecule(read_file(path), path); }

std::vector<Configuration> parse_trajectory(const std::string& text, const Molecule& mol, const std::string& source) {
    std::vector<std::string_view> lines;
    std::string_view rest(text);
    while (!rest.empty()) {
        const auto nl = rest.find('\n');
        std::string_view line = rest.substr(0, nl);
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        lines.push_back(line);
        rest = nl == std::string_view::npos ? std::string_view() : rest.substr(nl + 1);
    }

    const std::size_t nuclei = mol.nucleus_count();
    const std::size_t electrons = static_cast<std::size_t>(mol.electron_count());
    const std::size_t expected = nuclei + electrons;
    const auto where = [&source](std::size_t i) { return source + ":" + std::to_string(i + 1); };

    std::vector<Configuration> frames;
    std::size_t i = 0;
    while (true) {
        while (i < lines.size() && blank(lines[i])) {
            ++i;
        }
        if (i >= lines.size()) {
            break;
        }
        const auto head = split_ws(lines[i]);
        std::size_t count = 0;
        const auto [ptr, ec] = std::from_chars(head[0].data(), head[0].data() + head[0].size(), count);
        if (head.size() != 1 || ec != std::errc() || ptr != head[0].data() + head[0].size()) {
            throw InputError(where(i) + ": expected a particle count");
        }
        if (count != expected) {
            throw InputError(where(i) + ": frame has " + std::to_string(count) + " particles, molecule has " +
                             std::to_string(nuclei) + " nuclei and " + std::to_string(electrons) + " electrons");
        }
        if (i + 1 >= lines.size()) {
            throw InputError(where(i) + ": truncated frame");
        }
        i += 2;  // count and comment
        Configuration cfg;
        for (std::size_t k = 0; k < count; ++k, ++i) {
            if (i >= lines.size()) {
                throw InputError(where(i) + ": truncated frame");
            }
            const auto tok = split_ws(lines[i]);
            if (tok.size() != 7) {
                throw InputError(where(i) + ": expected 'species x y z px py pz'");
            }
            const bool is_electron = tok[0] == "e";
            if (k < nuclei && is_electron) {
                throw InputError(where(i) + ": electron listed before all nuclei");
            }
            if (k >= nuclei && !is_electron) {
                throw InputError(where(i) + ": expected an electron (species 'e')");
            }
            Vec3 pos;
            Vec3 mom;
            for (int c = 0; c < 3; ++c) {
                pos[c] = parse_number(tok[static_cast<std::size_t>(1 + c)], where(i));
                mom[c] = parse_number(tok[static_cast<std::size_t>(4 + c)], where(i));
            }
            if (is_electron) {
                cfg.electron_positions.push_back(pos);
                cfg.electron_momenta.push_back(mom);
            } else {
                cfg.nuclear_positions.push_back(pos);
                cfg.nuclear_momenta.push_back(mom);
            }
        }
        frames.push_back(std::move(cfg));
    }
    if (frames.empty()) {
        throw InputError(source + ": trajectory contains no frames");
    }
    return frames;
}

std::vector<Configuration> load_trajectory(const std::string& path, const Molecule& mol) {
    return parse_trajectory(read_file(path), mol, path);
}

void Table::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) {
        throw Error("report row width does not match its header");
    }
    rows.push_back(std::move(row));
}

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ec == std::errc() ? ptr : buf);
}

std::string to_json(const Report& report) {
    json doc;
    doc["command"] = report.command;
    doc["molecule"] = report.molecule;
    doc["ok"] = report.ok;
    json summary = json::object();
    for (const auto& [key, cell] : report.summary) {
        summary[key] = cell_json(cell);
    }
    doc["summary"] = summary;
    json rows = json::array();
    for (const auto& row : report.table.rows) {
        json obj = json::object();
        for (std::size_t c = 0; c < row.size(); ++c) {
            obj[report.table.columns[c]] = cell_json(row[c]);
        }
        rows.push_back(std::move(obj));
    }
    doc["rows"] = std::move(rows);
    return doc.dump(2) + "\n";
}

std::string to_csv(const Report& report) {
    const Table& t = report.table;
    std::vector<std::size_t> width(t.columns.size(), 0);
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (const auto* v = std::get_if<std::vector<double>>(&row[c])) {
                width[c] = std::max(width[c], v->size());
            }
        }
    }
    std::ostringstream out;
    const auto header_cell = [&](std::size_t c) {
        if (width[c] == 0) {
            return csv_escape(t.columns[c]);
        }
        std::string s;
        for (std::size_t k = 0; k < width[c]; ++k) {
            s += (k ? "," : "") + csv_escape(t.columns[c] + "_" + std::to_string(k + 1));
        }
        return s;
    };
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
        out << (c ? "," : "") << header_cell(c);
    }
    out << "\n";
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            out << (c ? "," : "");
            if (width[c] > 0) {
                const auto* v = std::get_if<std::vector<double>>(&row[c]);
                for (std::size_t k = 0; k < width[c]; ++k) {
                    out << (k ? "," : "") << (v && k < v->size() ? format_double((*v)[k]) : "");
                }
            } else {
                out << cell_text(row[c]);
            }
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace eckart::io
