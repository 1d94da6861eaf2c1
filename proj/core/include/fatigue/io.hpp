#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "fatigue/diagnostics.hpp"
#include "fatigue/evolution.hpp"
#include "fatigue/fe_operators.hpp"
#include "fatigue/mesh.hpp"
#include "fatigue/rescaling.hpp"

namespace fatigue {

/// Fixed column order of the per-step CSV.
inline constexpr std::string_view kTraceCsvHeader =
    "step,t,E_elastic,E_gradient,diss_inc,visc_inc,work_inc,balance_residual_running,min_alpha,max_V,kkt_eq,"
    "kkt_sign,am_iters,psi,eps_alphadot_lumped,lower_active_count";

/// One row per grid time, the initial state included as step 0.
std::string trace_csv(const EvolutionTrace& trace);

/// Legacy VTK ASCII unstructured grid of triangles with point data alpha, u
/// and cell data V, f_of_V, grad_u_norm.
std::string vtk_snapshot(const Mesh& mesh, const FeOperators& ops, const MaterialLaws& laws, const Vector& alpha,
                         const Vector& u, const Vector& V, std::string_view title);

/// Columns s, t, min_alpha, psi, plateau; plateau flags the increment ending at the sample.
std::string rescaled_csv(const RescaledEvolution& r);

std::string balance_text(const BalanceReport& b);
std::string sweep_text(const SweepReport& rep);

/// Creates parent directories; throws std::runtime_error if the file cannot be written.
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace fatigue
