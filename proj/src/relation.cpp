#include "bayesclean/relation.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

namespace bayesclean {

ValueId ValuePool::intern(std::string_view token) {
    auto it = ids_.find(std::string(token));
    if (it != ids_.end()) return it->second;
    ValueId id = static_cast<ValueId>(tokens_.size());
    tokens_.emplace_back(token);
    ids_.emplace(tokens_.back(), id);
    return id;
}

std::optional<ValueId> ValuePool::find(std::string_view token) const {
    auto it = ids_.find(std::string(token));
    if (it == ids_.end()) return std::nullopt;
    return it->second;
}

Schema::Schema(std::vector<std::string> attributes) : names_(std::move(attributes)) {
    if (names_.empty()) throw std::invalid_argument("schema needs at least one attribute");
    std::unordered_set<std::string_view> seen;
    for (const auto& n : names_) {
        if (n.empty()) throw std::invalid_argument("empty attribute name");
        if (!seen.insert(n).second)
            throw std::invalid_argument("duplicate attribute name: " + n);
    }
}

std::optional<std::size_t> Schema::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == name) return i;
    return std::nullopt;
}

Relation::Relation(Schema schema, std::shared_ptr<ValuePool> pool,
                   std::vector<Row> rows, std::string provenance)
    : schema_(std::move(schema)),
      pool_(std::move(pool)),
      rows_(std::move(rows)),
      provenance_(std::move(provenance)) {
    for (const auto& row : rows_)
        if (row.size() != schema_.arity())
            throw std::invalid_argument("tuple arity does not match schema");
}

Relation Relation::from_cells(Schema schema,
                              const std::vector<std::vector<Cell>>& rows,
                              std::string provenance) {
    auto pool = std::make_shared<ValuePool>();
    std::vector<Row> out;
    out.reserve(rows.size());
    for (const auto& cells : rows) {
        Row row;
        row.reserve(cells.size());
        for (const auto& c : cells)
            row.push_back(c ? pool->intern(*c) : kNull);
        out.push_back(std::move(row));
    }
    return Relation(std::move(schema), std::move(pool), std::move(out),
                    std::move(provenance));
}

std::optional<std::string_view> Relation::cell(std::size_t r, std::size_t c) const {
    ValueId id = rows_.at(r).at(c);
    if (id == kNull) return std::nullopt;
    return std::string_view(pool_->token(id));
}

Cell Relation::cell_copy(std::size_t r, std::size_t c) const {
    auto v = cell(r, c);
    if (!v) return std::nullopt;
    return std::string(*v);
}

Relation Relation::with_rows(std::vector<Row> rows, std::string provenance) const {
    return Relation(schema_, pool_, std::move(rows),
                    provenance.empty() ? provenance_ : std::move(provenance));
}

bool Relation::same_cells(const Relation& other) const {
    if (schema_ != other.schema_ || size() != other.size()) return false;
    for (std::size_t i = 0; i < size(); ++i)
        for (std::size_t j = 0; j < arity(); ++j)
            if (cell(i, j) != other.cell(i, j)) return false;
    return true;
}

namespace {

// One CSV record; handles quoted fields, escaped quotes, and embedded
// newlines. Returns false at end of input. line_no tracks physical lines for
// error messages.
bool read_record(std::istream& in, std::vector<std::string>& fields,
                 std::size_t& line_no, std::size_t record_no) {
    fields.clear();
    int ch = in.get();
    if (ch == EOF) return false;

    std::string field;
    bool in_quotes = false;
    bool field_was_quoted = false;
    ++line_no;

    while (true) {
        if (ch == EOF) {
            if (in_quotes)
                throw ParseError("unterminated quoted field (record " +
                                     std::to_string(record_no) + ")",
                                 record_no);
            fields.push_back(std::move(field));
            return true;
        }
        char c = static_cast<char>(ch);
        if (in_quotes) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get();
                    field.push_back('"');
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line_no;
                field.push_back(c);
            }
        } else if (c == '"' && field.empty() && !field_was_quoted) {
            in_quotes = true;
            field_was_quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
            field_was_quoted = false;
        } else if (c == '\r') {
            if (in.peek() == '\n') in.get();
            fields.push_back(std::move(field));
            return true;
        } else if (c == '\n') {
            fields.push_back(std::move(field));
            return true;
        } else {
            field.push_back(c);
        }
        ch = in.get();
    }
}

void write_field(std::ostream& out, std::string_view v) {
    bool quote = v.find_first_of(",\"\n\r") != std::string_view::npos;
    if (!quote) {
        out << v;
        return;
    }
    out << '"';
    for (char c : v) {
        if (c == '"') out << '"';
        out << c;
    }
    out << '"';
}

}  // namespace

Relation read_csv(std::istream& in, std::string_view null_token,
                  std::string provenance) {
    std::vector<std::string> fields;
    std::size_t line_no = 0;
    if (!read_record(in, fields, line_no, 0))
        throw ParseError("empty CSV: missing header row", 0);
    Schema schema;
    try {
        schema = Schema(fields);
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("bad header: ") + e.what(), 0);
    }

    auto pool = std::make_shared<ValuePool>();
    std::vector<Row> rows;
    std::size_t record_no = 0;
    while (read_record(in, fields, line_no, record_no + 1)) {
        ++record_no;
        if (fields.size() != schema.arity())
            throw ParseError("row " + std::to_string(record_no) + " has " +
                                 std::to_string(fields.size()) + " fields, expected " +
                                 std::to_string(schema.arity()),
                             record_no);
        Row row;
        row.reserve(fields.size());
        for (const auto& f : fields)
            row.push_back(f == null_token ? kNull : pool->intern(f));
        rows.push_back(std::move(row));
    }
    return Relation(std::move(schema), std::move(pool), std::move(rows),
                    std::move(provenance));
}

Relation load_csv(const std::string& path, std::string_view null_token) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open CSV file: " + path);
    return read_csv(in, null_token, path);
}

void write_csv(const Relation& r, std::ostream& out, std::string_view null_token) {
    const auto& names = r.schema().names();
    for (std::size_t j = 0; j < names.size(); ++j) {
        if (j) out << ',';
        write_field(out, names[j]);
    }
    out << '\n';
    for (std::size_t i = 0; i < r.size(); ++i) {
        for (std::size_t j = 0; j < r.arity(); ++j) {
            if (j) out << ',';
            auto v = r.cell(i, j);
            if (!v) {
                write_field(out, null_token);
            } else {
                if (*v == null_token)
                    throw std::runtime_error(
                        "cell value collides with the null token at row " +
                        std::to_string(i + 1) + ", refusing to write ambiguous CSV");
                write_field(out, *v);
            }
        }
        out << '\n';
    }
}

void write_csv(const Relation& r, const std::string& path, std::string_view null_token) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open file for writing: " + path);
    write_csv(r, out, null_token);
    out.flush();
    if (!out) throw std::runtime_error("I/O failure writing CSV: " + path);
}

}  // namespace bayesclean
