#ifndef AUTOHSIC_PRESETS_HPP
#define AUTOHSIC_PRESETS_HPP

#include "autohsic/simulation.hpp"

namespace autohsic {

/// One (dgp, T) cell of a named simulation table.
struct PresetCell {
    DgpSpec dgp;
    int T = 0;
};

struct Preset {
    std::string name;
    std::vector<PresetCell> cells;
    int default_replications = 1000;
    int default_bootstrap = 500;
};

/// Known preset names: table1, table2, supp-table5 .. supp-table11.
std::vector<std::string> preset_names();

/// Throws std::invalid_argument for unknown names.
Preset lookup_preset(const std::string& name);

/// The simulation study's kernel list: Gaussian, Laplacian, BrownianDistance
/// (same family on both sides, median bandwidth).
std::vector<KernelPairSpec> standard_kernel_pairs();

} // namespace autohsic

#endif
