#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace bayesclean {

/// Interned cell value. Id 0 is the NULL sentinel and never maps to a token.
using ValueId = std::uint32_t;
inline constexpr ValueId kNull = 0;

/// One tuple, as interned value ids aligned with the schema.
using Row = std::vector<ValueId>;

/// Cell as seen by callers: a token, or nullopt for NULL.
using Cell = std::optional<std::string>;

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t row)
        : std::runtime_error(what), row_(row) {}
    std::size_t row() const { return row_; }

private:
    std::size_t row_;
};

/// Intern table mapping tokens to dense ids. Shared by a Relation and
/// everything derived from it (cleaned copies, noisy copies, models).
class ValuePool {
public:
    ValuePool() : tokens_(1) {}  // slot 0 stays empty: reserved for NULL

    ValueId intern(std::string_view token);
    std::optional<ValueId> find(std::string_view token) const;

    /// Token for a non-NULL id.
    const std::string& token(ValueId id) const { return tokens_.at(id); }
    std::size_t size() const { return tokens_.size(); }

private:
    std::vector<std::string> tokens_;
    std::unordered_map<std::string, ValueId> ids_;
};

class Schema {
public:
    Schema() = default;
    /// Attribute names must be unique and non-empty.
    explicit Schema(std::vector<std::string> attributes);

    std::size_t arity() const { return names_.size(); }
    const std::string& name(std::size_t i) const { return names_.at(i); }
    const std::vector<std::string>& names() const { return names_; }
    std::optional<std::size_t> index_of(std::string_view name) const;

    bool operator==(const Schema&) const = default;

private:
    std::vector<std::string> names_;
};

class Relation {
public:
    Relation(Schema schema, std::shared_ptr<ValuePool> pool,
             std::vector<Row> rows, std::string provenance = {});

    /// Builder used by tests and the synthetic generator.
    static Relation from_cells(Schema schema,
                               const std::vector<std::vector<Cell>>& rows,
                               std::string provenance = {});

    const Schema& schema() const { return schema_; }
    std::size_t size() const { return rows_.size(); }    // n
    std::size_t arity() const { return schema_.arity(); }  // m
    const Row& row(std::size_t i) const { return rows_.at(i); }
    const std::vector<Row>& rows() const { return rows_; }
    const std::string& provenance() const { return provenance_; }

    const ValuePool& pool() const { return *pool_; }
    const std::shared_ptr<ValuePool>& shared_pool() const { return pool_; }

    /// nullopt for NULL cells.
    std::optional<std::string_view> cell(std::size_t r, std::size_t c) const;
    Cell cell_copy(std::size_t r, std::size_t c) const;

    /// Same schema and pool, different contents.
    Relation with_rows(std::vector<Row> rows, std::string provenance = {}) const;

    bool same_cells(const Relation& other) const;  // token-wise equality

private:
    Schema schema_;
    std::shared_ptr<ValuePool> pool_;
    std::vector<Row> rows_;
    std::string provenance_;
};

// CSV (RFC-style quoting, UTF-8 passthrough, mandatory header). Cells equal
// to null_token load as NULL; NULL writes back as null_token.
Relation load_csv(const std::string& path, std::string_view null_token = "");
Relation read_csv(std::istream& in, std::string_view null_token = "",
                  std::string provenance = {});
void write_csv(const Relation& r, const std::string& path,
               std::string_view null_token = "");
void write_csv(const Relation& r, std::ostream& out,
               std::string_view null_token = "");

}  // namespace bayesclean
