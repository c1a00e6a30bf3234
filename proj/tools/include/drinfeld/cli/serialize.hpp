#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "drinfeld/analytic.hpp"
#include "drinfeld/anderson.hpp"
#include "drinfeld/shtuka.hpp"

namespace drinfeld::cli {

/// An ordered list of `key = value` lines.  Keys are unique and contain no
/// spaces; values are single-line canonical forms.  Lines starting with `#`
/// are comments and are not part of the record.
class Record {
public:
    void put(std::string key, std::string value);
    bool has(std::string_view key) const;
    /// Throws InvalidInput naming the key when absent.
    const std::string& get(std::string_view key) const;
    int get_int(std::string_view key) const;
    const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

    std::string to_text() const;
    static Record parse(std::string_view text);

    friend bool operator==(const Record& a, const Record& b) { return a.entries_ == b.entries_; }

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

/// `tag exact-zero` or `tag val prec : c_val c_val+1 ... c_prec-1` with
/// coefficients in the canonical F_q form.
std::string write_series(const InfSeries& s);
InfSeries read_series(const FiniteField* F, std::string_view text);

void write_point(Record& r, const std::string& key, const CurvePoint& P);
CurvePoint read_point(const Record& r, const std::string& key, const CurvePtr& E);

void write_matrix(Record& r, const std::string& prefix, const KMatrix& m);
KMatrix read_matrix(const Record& r, const std::string& prefix, const CurvePtr& E);

void write_operator(Record& r, const std::string& prefix, const KOperator& op);
KOperator read_operator(const Record& r, const std::string& prefix, const CurvePtr& E);

Record write_shtuka(const ShtukaData& sh);
ShtukaData read_shtuka(const Record& r, const CurvePtr& E);

Record write_basis(const MotiveBasis& b);
MotiveBasis read_basis(const Record& r, const CurvePtr& E);

Record write_coeffs(const StructureCoeffs& c);
StructureCoeffs read_coeffs(const Record& r, const CurvePtr& E);

/// rho_t, rho_y and the structure coefficients they were built from.
Record write_module(const AndersonModule& M);
AndersonModule read_module(const Record& r, const CurvePtr& E);

Record write_explog(const ExpLogCoeffs& c);
ExpLogCoeffs read_explog(const Record& r, const CurvePtr& E);

/// The series outputs of period_vector.
Record write_period(const PeriodResult& p);
PeriodResult read_period(const Record& r, const CurvePtr& E);

/// Exact equality of the serialized types (operator== is not defined on
/// every aggregate).
bool same(const ShtukaData& a, const ShtukaData& b);
bool same(const MotiveBasis& a, const MotiveBasis& b);
bool same(const StructureCoeffs& a, const StructureCoeffs& b);
bool same(const AndersonModule& a, const AndersonModule& b);
bool same(const ExpLogCoeffs& a, const ExpLogCoeffs& b);

}  // namespace drinfeld::cli
