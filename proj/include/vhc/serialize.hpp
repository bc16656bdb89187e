#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "vhc/assembly.hpp"
#include "vhc/configuration.hpp"
#include "vhc/residual.hpp"

namespace vhc {

nlohmann::json configuration_json(const ClusterConfiguration& config,
                                  const ClusterCharges& charges,
                                  const BalanceReport* report = nullptr);
void save_configuration(const std::string& path,
                        const ClusterConfiguration& config,
                        const ClusterCharges& charges,
                        const BalanceReport* report = nullptr);
std::pair<ClusterConfiguration, ClusterCharges> load_configuration(
    const std::string& path);

// assembly.json plus a binary-free CSV sidecar holding the H2eps mode samples
void save_assembly(const std::string& json_path, const std::string& sidecar_path,
                   const StreamAssembly& assembly);
StreamAssembly load_assembly(const std::string& json_path);

nlohmann::json outer_report_json(const OuterSolveReport& report);
nlohmann::json rate_report_json(const RateStudy& study);
nlohmann::json projections_json(const KernelProjections& p, int filament,
                                double eps_mu);

void write_json(const std::string& path, const nlohmann::json& j);
nlohmann::json read_json(const std::string& path);

}  // namespace vhc
