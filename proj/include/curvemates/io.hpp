#pragma once

// CSV and JSON formats. Numbers use the shortest representation that
// round-trips; files are written to a temporary name and renamed.

#include <filesystem>
#include <string>
#include <string_view>

#include "curvemates/association.hpp"
#include "curvemates/curve.hpp"
#include "curvemates/lambda.hpp"
#include "curvemates/verify.hpp"
#include "json.hpp"

namespace curvemates::io {

std::string format_number(double v);
/// Throws parse with `context` in the message.
double parse_number(std::string_view text, const std::string& context);

void write_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

/// s,x,y,z,Tx,Ty,Tz,Nx,Ny,Nz,Bx,By,Bz,kappa,tau,kappa_prime,tau_prime,kappa_second,tau_second.
/// Without frames only s,x,y,z are written.
std::string curve_csv(const SampledCurve& curve);
/// Reads either layout. Frame columns without the rate columns get the
/// rates by differencing kappa and tau.
SampledCurve parse_curve_csv(const std::string& text, const std::string& name = "curve");

/// "# key=value ..." header with provenance, method and constants, then
/// s,lambda,lambda_prime,lambda_double_prime.
std::string lambda_csv(const LambdaSolution& sol);
LambdaSolution parse_lambda_csv(const std::string& text, const std::string& name = "lambda");

/// {"kind":"helix","a":..,"b":..}; samples carry "s" and "points" inline.
nlohmann::json to_json(const CurveSpec& curve);
/// Also accepts {"kind":"samples","path":"file.csv"} with columns t,x,y,z
/// (or s,x,y,z), resolved against `base_dir`.
CurveSpec curve_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});

nlohmann::json to_json(const AssociationSpec& spec);
AssociationSpec association_from_json(const nlohmann::json& j);

nlohmann::json to_json(const VerificationReport& report);

}  // namespace curvemates::io
