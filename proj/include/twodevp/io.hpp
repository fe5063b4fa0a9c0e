#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "twodevp/apps.hpp"
#include "twodevp/eigencurve.hpp"
#include "twodevp/solver.hpp"
#include "twodevp/solver2x2.hpp"

// Serialization of matrices, reports and curve tables.
//
// Complex numbers are JSON arrays [re, im]. Doubles are written in the
// shortest form that parses back to the same bits, so every report
// round-trips exactly.
namespace twodevp {

using Json = nlohmann::json;

enum class MatrixFormat { json, matrix_market };

struct MatrixFile {
  MatrixFormat format = MatrixFormat::json;
  CMatrix matrix;
  // Matrix Market "general" symmetry: nothing guarantees the entries are
  // Hermitian.
  bool general = false;
};

// Format is picked from the content: a leading "%%MatrixMarket" banner means
// Matrix Market, anything else is parsed as JSON.
MatrixFile parse_matrix_text(const std::string& text);
MatrixFile read_matrix_file(const std::string& path);

CMatrix matrix_from_json(const Json& j);
Json matrix_to_json(const CMatrix& m);

// coordinate or array; real, integer or complex; general, symmetric or
// hermitian.
CMatrix parse_matrix_market(std::istream& in, bool* general = nullptr);
void write_matrix_market(std::ostream& out, const CMatrix& m);

// For inputs that must be Hermitian. A Matrix Market file declared general is
// replaced by (M + M^H)/2 and a warning is appended; everything else goes
// through HermitianMatrix::from unchanged.
CMatrix hermitian_input(const MatrixFile& f, std::vector<std::string>& warnings,
                        const std::string& label);

Json vector_to_json(const CVector& v);
CVector vector_from_json(const Json& j);

Json to_json(const TwoDEigentriple& t);
TwoDEigentriple triple_from_json(const Json& j);

Json to_json(const MuBound& b);
Json to_json(const LambdaBounds& b);
Json to_json(const RegularityVerdict& r);
Json to_json(const SolveReport& r);
SolveReport report_from_json(const Json& j);

Json to_json(const TwoByTwoSolution& s);
Json to_json(const MinimaxResult& r);
Json to_json(const StabilityResult& r);

// Header mu,lambda_1..lambda_n,g_1..g_n; values with 17 significant digits.
void write_curves_csv(std::ostream& out, const std::vector<CurveSample>& samples);
std::vector<CurveSample> read_curves_csv(std::istream& in);

}  // namespace twodevp
