#pragma once

#include <optional>
#include <string>
#include <vector>

#include "starksic/sic.hpp"

namespace starksic {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    long d = 5;
    long P = 50;                         // decimal digits, >= 30
    long X_override = 0;                 // --coeff-bound
    std::string cache_dir;               // --cache-dir (empty: no cache)
    std::string sign_strategy = "auto";  // auto | bruteforce | known_g:PATH | search
    long lambda_override = 0;            // --lambda (0: search all)
    std::string out_path;                // --out (empty: stdout)
    int threads = 1;                     // --threads
    std::string fixtures_dir = "fixtures";
    std::string fiducial_path;           // verify input
    long search_budget = 3000;
    unsigned search_seed = 1u;

    void validate() const;
};

/// One pipeline stage: a deterministic payload (JSON text, decimal strings
/// only) plus a separately reported wall time.
struct StageResult {
    std::string stage;
    bool ok = true;
    std::string payload_json;  // complete JSON object, one line
    double wall_ms = 0;
};

struct PipelineReport {
    std::vector<StageResult> stages;
    bool valid = false;
    int exit_code = 0;  // 0 valid, 1 invalid certificate, 2 stage error, 3 config error

    void write(std::ostream& os) const;  // JSON lines: payload then timing per stage
    std::string payload_only() const;    // concatenated payload lines (determinism checks)
};

/// Outputs of a full pipeline run, for callers that need the artifacts.
struct PipelineState {
    std::optional<FieldContext> ctx;
    std::optional<RayClassGroup> group;
    std::optional<ZetaTable> table;
    long internal_P = 0;  // possibly escalated past RunConfig::P for recognition
    std::optional<RecognizedPolynomial> f, g, gtilde;
    std::optional<HPolynomials> hpolys;
    std::optional<SignAssignment> signs;
    std::optional<FiducialCertificate> certificate;
    std::vector<LambdaOutcome> lambda_log;
};

PipelineReport cmd_field(const RunConfig& cfg);
PipelineReport cmd_group(const RunConfig& cfg);
PipelineReport cmd_zeta(const RunConfig& cfg);
PipelineReport cmd_recognize(const RunConfig& cfg, PipelineState* state = nullptr);
PipelineReport cmd_fiducial(const RunConfig& cfg, PipelineState* state = nullptr);
PipelineReport cmd_all(const RunConfig& cfg, PipelineState* state = nullptr);
PipelineReport cmd_verify(const RunConfig& cfg, PipelineState* state = nullptr);

/// Byte-exact polynomial fixture comparison plus numeric fiducial matching
/// for the bundled d = 5 and d = 11 data.
PipelineReport fixture_suite(const RunConfig& cfg);

/// Zeta table with automatic precision escalation for recognition: if the
/// coefficient heights of f_d demand more digits than cfg.P provides, the
/// table is recomputed at the required precision. Returns the internal P.
std::pair<ZetaTable, long> zeta_with_escalation(const FieldContext& ctx, const RayClassGroup& G,
                                                const RunConfig& cfg);

/// Strategy dispatch; fixes the global sign with the M idempotency oracle
/// when the strategy leaves it open.
SignAssignment resolve_signs_auto(const FieldContext& ctx, const RayClassGroup& G, const ZetaTable& table,
                                  const RunConfig& cfg);

/// Entrywise comparison after phase normalization; true when every entry
/// agrees to at least 10^-digits in absolute value.
bool fiducial_matches(const std::vector<Complex>& got, const std::vector<Complex>& want, long digits);

/// Sweeps (root_index, lambda) for the representative equal to a printed
/// fiducial; returns the pair when found.
std::optional<std::pair<long, long>> find_matching_representative(
    const FieldContext& ctx, const RayClassGroup& G, const RecognizedPolynomial& gtilde,
    const RecognizedPolynomial& htilde, long P, int threads, const std::vector<Complex>& printed,
    long match_digits);

RecognizedPolynomial load_polynomial_file(const std::string& path);
std::vector<Complex> load_fiducial_file(const std::string& path, long& d, Prec bits);

/// Significant decimal digits left in a fiducial text file (used to pick the
/// verification threshold for external inputs).
long fiducial_file_digits(const std::string& path);

std::string certificate_json(const FiducialCertificate& cert, long digits);

}  // namespace starksic
