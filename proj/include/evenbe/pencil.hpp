#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace evenbe {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

struct InvalidScope : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct DegenerateInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct RankDeficient : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct Infeasible : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct EmptyKernel : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct GenerationFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr double kSymTol = 1e-12;
inline constexpr double kPdTol = 1e-12;
inline constexpr double kRankTol = 1e-12;
inline constexpr double kFiniteTol = 1e-10;
inline constexpr double kCompatTol = 1e-10;

// Pencil L(z) = M + zN over blocks (J,R,E,B,S):
//   M = [0, J-R, B; (J-R)^H, 0, 0; B^H, 0, S],  N = [0, E, 0; -E^H, 0, 0; 0, 0, 0]
// with J skew-Hermitian, R/E/S Hermitian and S positive definite.
struct StructuredPencil {
  Index n = 0;
  Index m = 0;
  Matrix J, R, E, B, S;
  bool is_real = false;
};

// Validates shapes, symmetry classes and definiteness; throws std::invalid_argument.
// Inputs violating the tolerances are rejected, never repaired.
StructuredPencil make_pencil(Matrix J, Matrix R, Matrix E, Matrix B, Matrix S);
void validate(const StructuredPencil& p);

// Candidate eigenpair: lambda purely imaginary and nonzero, x = (x1;x2;x3) != 0.
struct EigenPairQuery {
  Complex lambda{0.0, 0.0};
  Vector x1, x2, x3;
};

EigenPairQuery make_query(Complex lambda, Vector x1, Vector x2, Vector x3);
void validate(const StructuredPencil& p, const EigenPairQuery& q);
Vector full_x(const EigenPairQuery& q);

enum class BlockSet { JE, RE, JR, JB, RB, EB, JRB, REB, JEB, JRE, JREB };
enum class Structure { BlockOnly, SymmetryPreserving };
enum class Field { Complex, Real };

struct PerturbationScope {
  BlockSet blocks = BlockSet::JE;
  Structure structure = Structure::BlockOnly;
  Field field = Field::Complex;
};

inline constexpr BlockSet kAllBlockSets[] = {
    BlockSet::JE,  BlockSet::RE,  BlockSet::JR,  BlockSet::JB,
    BlockSet::RB,  BlockSet::EB,  BlockSet::JRB, BlockSet::REB,
    BlockSet::JEB, BlockSet::JRE, BlockSet::JREB};

bool has_block(BlockSet s, char block);  // block in {'J','R','E','B'}
bool scope_is_valid(const PerturbationScope& scope);
void require_valid_scope(const PerturbationScope& scope);
std::string to_string(BlockSet s);
std::string to_string(const PerturbationScope& scope);
std::optional<BlockSet> block_set_from_string(std::string_view name);

enum class ReportKind { Exact, Bounds, Infinite };

struct ConditionDiagnostic {
  std::string name;
  double residual = 0.0;
  double threshold = 0.0;
  bool passed = false;
};

// Minimizing perturbation blocks; blocks outside the scope are zero.
struct MinimizerBlocks {
  Matrix dJ, dR, dE, dB;
};

MinimizerBlocks zero_minimizer(const StructuredPencil& p);

struct BackwardErrorReport {
  ReportKind kind = ReportKind::Infinite;
  double value = 0.0;           // Exact
  double lower = 0.0;           // Bounds
  double upper = 0.0;           // Bounds
  std::vector<ConditionDiagnostic> finiteness;
  std::optional<MinimizerBlocks> minimizer;
};

Matrix assemble_M(const StructuredPencil& p);
Matrix assemble_N(const StructuredPencil& p);
Matrix evaluate(const StructuredPencil& p, Complex z);
double residual(const StructuredPencil& p, const EigenPairQuery& q);

// Raw-block assembly, used for perturbed pencils whose blocks may leave the
// symmetry classes (block-only perturbations do).
Matrix assemble_M_blocks(const Matrix& J, const Matrix& R, const Matrix& E,
                         const Matrix& B, const Matrix& S);
Matrix assemble_N_blocks(const Matrix& E, Index m);
Matrix evaluate_blocks(const Matrix& J, const Matrix& R, const Matrix& E,
                       const Matrix& B, const Matrix& S, Complex z);
Matrix evaluate_perturbed(const StructuredPencil& p, const MinimizerBlocks& d,
                          Complex z);

}  // namespace evenbe
