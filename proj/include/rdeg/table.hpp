#pragma once

// Ingestion of published class-number records and the reproduction pipeline:
// CSV in, certified degree sets out, as TSV for reading or JSON lines for
// auditing. Class numbers are external data and always carry a source string.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "rdeg/abelian.hpp"
#include "rdeg/criteria.hpp"

namespace rdeg {

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

/// One ingested class-number record for a real cyclotomic field.
struct FieldRecord {
    std::uint64_t ell = 0;
    std::uint64_t h = 1;
    std::optional<std::vector<std::int64_t>> factors;  // exact class group, when known
    std::string source;
};

namespace detail {

inline std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, sep)) out.push_back(field);
    if (!line.empty() && line.back() == sep) out.push_back("");
    return out;
}

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

// "a x b x c" group literals used in the CSV factor and shape columns.
inline std::vector<std::int64_t> parse_x_factors(const std::string& text) {
    std::vector<std::int64_t> out;
    std::string token;
    std::istringstream is(text);
    while (std::getline(is, token, 'x')) {
        std::string t = trim(token);
        if (t.empty()) throw ParseError("empty factor in group literal");
        out.push_back(std::stoll(t));
    }
    if (out.empty()) throw ParseError("empty group literal");
    return out;
}

inline std::map<std::string, std::size_t> header_columns(const std::string& header) {
    std::map<std::string, std::size_t> cols;
    auto names = split(header, ',');
    for (std::size_t i = 0; i < names.size(); ++i) cols[trim(names[i])] = i;
    return cols;
}

inline std::string cell(const std::vector<std::string>& row,
                        const std::map<std::string, std::size_t>& cols, const std::string& name) {
    auto it = cols.find(name);
    if (it == cols.end() || it->second >= row.size()) return "";
    return trim(row[it->second]);
}

}  // namespace detail

inline std::vector<FieldRecord> load_records(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) throw ParseError("missing header line");
    auto cols = detail::header_columns(header);
    if (!cols.count("ell") || !cols.count("h")) throw ParseError("header must name ell and h");

    std::vector<FieldRecord> records;
    std::set<std::uint64_t> seen;
    std::string line;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::trim(line).empty()) continue;
        auto row = detail::split(line, ',');
        auto fail = [&](const std::string& msg) {
            throw ParseError("line " + std::to_string(lineno) + ": " + msg);
        };
        FieldRecord rec;
        try {
            rec.ell = std::stoull(detail::cell(row, cols, "ell"));
            rec.h = std::stoull(detail::cell(row, cols, "h"));
        } catch (const std::exception&) {
            fail("malformed integer field");
        }
        if (!is_prime_u64(rec.ell)) fail(std::to_string(rec.ell) + " is not prime");
        if (rec.h < 1) fail("class number must be >= 1");
        std::string factors = detail::cell(row, cols, "factors");
        if (!factors.empty()) {
            rec.factors = detail::parse_x_factors(factors);
            std::uint64_t prod = 1;
            for (auto f : *rec.factors) prod *= static_cast<std::uint64_t>(f);
            if (prod != rec.h) fail("factors do not multiply to h");
        }
        rec.source = detail::cell(row, cols, "source");
        if (!seen.insert(rec.ell).second) fail("duplicate record for ell = " + std::to_string(rec.ell));
        records.push_back(std::move(rec));
    }
    return records;
}

inline std::vector<FieldRecord> load_records(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    return load_records(in);
}

/// One reproduced row: the field, its class number, phi(h) and the certified
/// degree set with the certificates behind it.
struct TableRow {
    std::uint64_t ell = 0;
    std::uint64_t h = 1;
    std::uint64_t phi_h = 1;
    std::vector<std::uint64_t> r_set;
    std::vector<RCertificate> certificates;
};

/**
 * Reproduces the published table: for each record, phi(h) and the degree set
 * certified by the coprimality criterion. The published selection used only
 * that route, so the valuation criterion is deliberately left out here; run
 * `certify` for the full set of applicable criteria.
 */
inline std::vector<TableRow> reproduce_table(const std::vector<FieldRecord>& records) {
    std::vector<TableRow> rows;
    for (const auto& rec : records) {
        TableRow row;
        row.ell = rec.ell;
        row.h = rec.h;
        row.phi_h = euler_phi(rec.h);
        ClassData data = rec.factors
                             ? ClassData::from_group(FiniteAbelianGroup::from_cyclic_orders(*rec.factors))
                             : ClassData::from_order(rec.h);
        RSetOptions options;
        options.use_pvaluation = false;
        RSetResult result = r_set_real_cyclotomic(rec.ell, data, options);
        row.r_set.assign(result.r.begin(), result.r.end());
        row.certificates = std::move(result.certificates);
        rows.push_back(std::move(row));
    }
    std::sort(rows.begin(), rows.end(),
              [](const TableRow& a, const TableRow& b) { return a.ell < b.ell; });
    return rows;
}

inline std::string render_table_tsv(const std::vector<TableRow>& rows) {
    std::ostringstream os;
    os << "ell\th\tphi\tR\n";
    for (const auto& row : rows) {
        os << row.ell << "\t" << row.h << "\t" << row.phi_h << "\t";
        for (std::size_t i = 0; i < row.r_set.size(); ++i) {
            if (i) os << ",";
            os << row.r_set[i];
        }
        if (row.r_set.empty()) os << "-";
        os << "\n";
    }
    return os.str();
}

inline std::string render_table_jsonl(const std::vector<TableRow>& rows) {
    std::ostringstream os;
    for (const auto& row : rows) {
        nlohmann::json j;
        j["ell"] = row.ell;
        j["h"] = row.h;
        j["phi_h"] = row.phi_h;
        j["r_set"] = row.r_set;
        j["certificates"] = nlohmann::json::array();
        for (const auto& c : row.certificates) j["certificates"].push_back(c.to_json());
        os << j.dump() << "\n";
    }
    return os.str();
}

// Parses the TSV rendering back into bare rows (round-trip check).
inline std::vector<TableRow> parse_table_tsv(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line)) throw ParseError("empty table");
    std::vector<TableRow> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        auto parts = detail::split(line, '\t');
        if (parts.size() != 4) throw ParseError("malformed table row: " + line);
        TableRow row;
        row.ell = std::stoull(parts[0]);
        row.h = std::stoull(parts[1]);
        row.phi_h = std::stoull(parts[2]);
        if (parts[3] != "-") {
            for (const auto& v : detail::split(parts[3], ',')) row.r_set.push_back(std::stoull(v));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

/// Worked-example record: conductor, class data, the published degree set and
/// the route that produced it.
struct ExampleRecord {
    std::uint64_t modulus = 0;
    std::uint64_t h = 1;
    std::optional<std::vector<std::int64_t>> factors;
    std::optional<std::vector<std::int64_t>> galois_shape;  // for composite conductors
    std::vector<std::uint64_t> expected;
    std::string route;
    std::string source;
};

inline std::vector<ExampleRecord> load_example_records(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) throw ParseError("missing header line");
    auto cols = detail::header_columns(header);
    for (const char* req : {"modulus", "h", "expected", "route"}) {
        if (!cols.count(req)) throw ParseError(std::string("header must name ") + req);
    }
    std::vector<ExampleRecord> records;
    std::string line;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::trim(line).empty()) continue;
        auto row = detail::split(line, ',');
        ExampleRecord rec;
        try {
            rec.modulus = std::stoull(detail::cell(row, cols, "modulus"));
            rec.h = std::stoull(detail::cell(row, cols, "h"));
        } catch (const std::exception&) {
            throw ParseError("line " + std::to_string(lineno) + ": malformed integer field");
        }
        std::string factors = detail::cell(row, cols, "factors");
        if (!factors.empty()) rec.factors = detail::parse_x_factors(factors);
        std::string shape = detail::cell(row, cols, "shape");
        if (!shape.empty()) rec.galois_shape = detail::parse_x_factors(shape);
        if (!rec.galois_shape && !is_prime_u64(rec.modulus))
            throw ParseError("line " + std::to_string(lineno) +
                             ": composite modulus needs a shape column");
        std::istringstream exp(detail::cell(row, cols, "expected"));
        std::uint64_t v;
        while (exp >> v) rec.expected.push_back(v);
        rec.route = detail::cell(row, cols, "route");
        rec.source = detail::cell(row, cols, "source");
        records.push_back(std::move(rec));
    }
    return records;
}

inline std::vector<ExampleRecord> load_example_records(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    return load_example_records(in);
}

struct ExampleOutcome {
    std::uint64_t modulus = 0;
    std::string route;
    std::vector<std::uint64_t> asserted;
    std::vector<std::uint64_t> certified;
    bool asserted_certified = false;  // every asserted degree was certified
    bool exact = false;               // certified set equals the asserted set
    bool duplicate = false;           // repeated input record, noted not re-counted
};

struct ExamplesReport {
    std::vector<ExampleOutcome> outcomes;
    bool all_pass = false;
};

/**
 * Runs each worked example against its published degree set. An example
 * passes when every published degree is certified; a certified superset is
 * reported (exact = false) rather than failed.
 */
inline ExamplesReport run_examples(const std::vector<ExampleRecord>& records) {
    ExamplesReport report;
    std::set<std::pair<std::uint64_t, std::uint64_t>> seen;
    for (const auto& rec : records) {
        ExampleOutcome outcome;
        outcome.modulus = rec.modulus;
        outcome.route = rec.route;
        outcome.asserted = rec.expected;
        outcome.duplicate = !seen.insert({rec.modulus, rec.h}).second;

        ClassData data = rec.factors
                             ? ClassData::from_group(FiniteAbelianGroup::from_cyclic_orders(*rec.factors))
                             : ClassData::from_order(rec.h);
        std::set<std::uint64_t> certified;
        if (rec.route == "two-power") {
            if (!rec.galois_shape) throw ParseError("two-power route needs a shape column");
            auto galois = FiniteAbelianGroup::from_cyclic_orders(*rec.galois_shape);
            std::vector<FiniteAbelianGroup> candidates =
                data.exact() ? std::vector<FiniteAbelianGroup>{*data.group}
                             : abelian_groups_of_order(rec.h);
            RCertificate c = check_two_power_counting(galois, candidates);
            if (c.accepted) {
                for (auto v : c.certified_nontrivial()) certified.insert(v);
            }
        } else {
            RSetResult res = r_set_real_cyclotomic(rec.modulus, data);
            certified = res.r;
        }
        outcome.certified.assign(certified.begin(), certified.end());
        outcome.asserted_certified = std::all_of(rec.expected.begin(), rec.expected.end(),
                                                 [&](std::uint64_t v) { return certified.count(v); });
        outcome.exact = outcome.asserted_certified && certified.size() == rec.expected.size();
        report.outcomes.push_back(std::move(outcome));
    }
    report.all_pass = std::all_of(report.outcomes.begin(), report.outcomes.end(),
                                  [](const ExampleOutcome& o) { return o.asserted_certified; });
    return report;
}

}  // namespace rdeg
