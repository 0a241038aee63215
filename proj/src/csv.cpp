#include "dfq/csv.hpp"

#include "dfq/parser.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace dfq {

std::vector<std::vector<std::string>> parse_csv_records(std::string_view text, char delimiter)
{
    std::vector<std::vector<std::string>> out;
    if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
    std::vector<std::string> record;
    std::string field;
    bool quoted = false, field_started = false;
    std::size_t line = 1;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() and text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                if (c == '\n') ++line;
                field += c;
            }
            continue;
        }
        if (c == '"') {
            if (field_started and not field.empty())
                throw CsvError("line " + std::to_string(line) + ": quote inside an unquoted field");
            quoted = true;
            field_started = true;
        } else if (c == delimiter) {
            record.push_back(std::move(field));
            field.clear();
            field_started = false;
        } else if (c == '\n' or c == '\r') {
            if (c == '\r' and i + 1 < text.size() and text[i + 1] == '\n') ++i;
            record.push_back(std::move(field));
            field.clear();
            field_started = false;
            if (not(record.size() == 1 and record[0].empty())) out.push_back(std::move(record));
            record.clear();
            ++line;
        } else {
            field += c;
            field_started = true;
        }
    }
    if (quoted) throw CsvError("line " + std::to_string(line) + ": unterminated quoted field");
    if (field_started or not record.empty()) {
        record.push_back(std::move(field));
        out.push_back(std::move(record));
    }
    return out;
}

namespace {

Domain infer_domain(const std::vector<std::vector<std::string>> &rows, std::size_t col)
{
    bool integer = true, decimal = true, timestamp = true, any = false;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const std::string &cell = rows[r][col];
        if (cell.empty()) continue;
        any = true;
        integer = integer and parse_integer(cell).has_value();
        decimal = decimal and parse_decimal(cell).has_value();
        timestamp = timestamp and parse_timestamp(cell).has_value();
    }
    if (not any) return Domain::Text;
    if (integer) return Domain::Integer;
    if (decimal) return Domain::Decimal;
    if (timestamp) return Domain::Timestamp;
    return Domain::Text;
}

std::string read_file(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (not in) throw CsvError("cannot read '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

LoadedRelation parse_csv(std::string_view text, const CsvOptions &options)
{
    auto rows = parse_csv_records(text, options.delimiter);
    if (rows.empty()) throw CsvError("missing header row");
    const auto &header = rows[0];
    for (std::size_t r = 1; r < rows.size(); ++r)
        if (rows[r].size() != header.size())
            throw CsvError("record " + std::to_string(r + 1) + " has " + std::to_string(rows[r].size()) +
                           " fields, header has " + std::to_string(header.size()));
    for (auto &[name, d] : options.types)
        if (std::find(header.begin(), header.end(), name) == header.end())
            throw CsvError("type given for unknown column '" + name + "'");

    std::vector<Attribute> attrs;
    for (std::size_t c = 0; c < header.size(); ++c) {
        auto it = options.types.find(header[c]);
        attrs.push_back({header[c], it != options.types.end() ? it->second : infer_domain(rows, c)});
    }
    Schema schema = [&] {
        try {
            return Schema(attrs);
        } catch (const SchemaError &err) {
            throw CsvError("bad header: " + err.detail());
        }
    }();

    std::vector<Value> cells;
    cells.reserve((rows.size() - 1) * header.size());
    for (std::size_t r = 1; r < rows.size(); ++r)
        for (std::size_t c = 0; c < header.size(); ++c) {
            auto v = parse_value(rows[r][c], attrs[c].domain);
            if (not v)
                throw CsvError("record " + std::to_string(r + 1) + ": '" + rows[r][c] + "' is not a " +
                               std::string(to_string(attrs[c].domain)) + " (column '" + header[c] + "')");
            cells.push_back(*v);
        }

    LoadedRelation out;
    out.relation = Relation::from_cells(std::move(schema), std::move(cells), &out.duplicates_dropped);
    if (out.duplicates_dropped)
        out.warnings.push_back("dropped " + std::to_string(out.duplicates_dropped) + " duplicate row(s)");
    out.meta.case_attr = options.case_attr;
    out.meta.time_attr = options.time_attr;
    for (auto *a : {&options.case_attr, &options.time_attr})
        if (*a and not out.relation.schema().contains(**a)) throw CsvError("no column named '" + **a + "'");
    collect_stats(out.relation, out.meta);
    return out;
}

LoadedRelation load_csv(const std::filesystem::path &path, const CsvOptions &options)
{
    try {
        return parse_csv(read_file(path), options);
    } catch (const CsvError &err) {
        throw CsvError(path.string() + ": " + err.what());
    }
}

Sidecar parse_sidecar(std::string_view text, const std::filesystem::path &base_dir)
{
    Sidecar out;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    auto trim = [](std::string s) {
        auto b = s.find_first_not_of(" \t\r");
        auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() or line[0] == '#') continue;
        auto eq = line.find('=');
        auto bad = [&](const std::string &why) {
            return CsvError("sidecar line " + std::to_string(lineno) + ": " + why);
        };
        if (eq == std::string::npos) throw bad("expected key=value");
        std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        auto count = [&](const std::string &v) {
            auto n = parse_integer(v);
            if (not n or *n < 0) throw bad("'" + v + "' is not a count");
            return static_cast<std::uint64_t>(*n);
        };
        if (key == "name") {
            out.name = value;
        } else if (key == "csv") {
            out.csv = base_dir / value;
        } else if (key == "case_attr") {
            out.options.case_attr = value;
        } else if (key == "time_attr") {
            out.options.time_attr = value;
        } else if (key == "delimiter") {
            if (value == "\\t") value = "\t";
            if (value.size() != 1) throw bad("delimiter must be one character");
            out.options.delimiter = value[0];
        } else if (key.starts_with("class.")) {
            auto c = parse_attr_class(value);
            if (not c) throw bad("unknown attribute class '" + value + "'");
            out.meta.attr_classes[key.substr(6)] = *c;
        } else if (key.starts_with("type.")) {
            auto d = parse_domain(value);
            if (not d) throw bad("unknown type '" + value + "'");
            out.options.types[key.substr(5)] = *d;
        } else if (key == "totality") {
            try {
                out.meta.totality_facts.insert(render(parse(value)));
            } catch (const ParseError &err) {
                throw bad(std::string("totality: ") + err.what());
            }
        } else if (key == "stats.N") {
            out.meta.stats.events = count(value);
        } else if (key == "stats.V") {
            out.meta.stats.cases = count(value);
        } else {
            throw bad("unknown key '" + key + "'");
        }
    }
    out.meta.case_attr = out.options.case_attr;
    out.meta.time_attr = out.options.time_attr;
    return out;
}

namespace {

void load_sidecar(Catalog &cat, const std::filesystem::path &path, std::vector<std::string> *warnings,
                  std::set<std::filesystem::path> *claimed)
{
    Sidecar sc = parse_sidecar(read_file(path), path.parent_path());
    if (sc.name.empty()) sc.name = path.stem().string();
    if (sc.csv.empty()) sc.csv = path.parent_path() / (path.stem().string() + ".csv");
    LoadedRelation loaded = load_csv(sc.csv, sc.options);
    for (auto &[attr, c] : sc.meta.attr_classes)
        if (not loaded.relation.schema().contains(attr))
            throw CsvError(path.string() + ": class declared for unknown column '" + attr + "'");
    sc.meta.stats.selectivity = loaded.meta.stats.selectivity;
    collect_stats(loaded.relation, sc.meta);
    if (warnings)
        for (auto &w : loaded.warnings) warnings->push_back(sc.csv.string() + ": " + w);
    if (claimed) claimed->insert(std::filesystem::weakly_canonical(sc.csv));
    cat.add(sc.name, std::move(loaded.relation), std::move(sc.meta));
}

void load_bare_csv(Catalog &cat, const std::filesystem::path &path, std::vector<std::string> *warnings)
{
    LoadedRelation loaded = load_csv(path);
    if (warnings)
        for (auto &w : loaded.warnings) warnings->push_back(path.string() + ": " + w);
    cat.add(path.stem().string(), std::move(loaded.relation), std::move(loaded.meta));
}

} // namespace

void load_catalog_path(Catalog &cat, const std::filesystem::path &path, std::vector<std::string> *warnings)
{
    namespace fs = std::filesystem;
    if (fs::is_directory(path)) {
        std::vector<fs::path> metas, csvs;
        for (auto &entry : fs::directory_iterator(path)) {
            if (entry.path().extension() == ".meta") metas.push_back(entry.path());
            if (entry.path().extension() == ".csv") csvs.push_back(entry.path());
        }
        std::sort(metas.begin(), metas.end());
        std::sort(csvs.begin(), csvs.end());
        std::set<fs::path> claimed;
        for (auto &m : metas) load_sidecar(cat, m, warnings, &claimed);
        for (auto &c : csvs)
            if (not claimed.contains(fs::weakly_canonical(c))) load_bare_csv(cat, c, warnings);
        return;
    }
    if (not fs::exists(path)) throw CsvError("no such file or directory: '" + path.string() + "'");
    if (path.extension() == ".meta")
        load_sidecar(cat, path, warnings, nullptr);
    else
        load_bare_csv(cat, path, warnings);
}

} // namespace dfq
