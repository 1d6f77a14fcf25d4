#include "autohsic/presets.hpp"

namespace autohsic {

std::vector<KernelPairSpec> standard_kernel_pairs() {
    return {
        {KernelSpec::gaussian(), KernelSpec::gaussian()},
        {KernelSpec::laplacian(), KernelSpec::laplacian()},
        {KernelSpec::brownian(), KernelSpec::brownian()},
    };
}

std::vector<std::string> preset_names() {
    return {"table1",      "table2",      "supp-table5", "supp-table6", "supp-table7",
            "supp-table8", "supp-table9", "supp-table10", "supp-table11"};
}

namespace {

const std::vector<int> kVectorDims = {1, 5, 10, 20, 40, 80, 160};
const std::vector<int> kSampleSizes = {100, 200};

template <typename MakeDgp>
void add_vector_cells(std::vector<PresetCell>& cells, const MakeDgp& make) {
    for (int T : kSampleSizes)
        for (int d : kVectorDims) cells.push_back({make(d), T});
}

std::vector<PresetCell> matrix_cells(int T) {
    std::vector<PresetCell> cells;
    for (double c : {0.0, 0.2, 0.3})
        for (int d : {2, 5, 8}) cells.push_back({MatrixGarch{d, c}, T});
    return cells;
}

} // namespace

Preset lookup_preset(const std::string& name) {
    Preset preset;
    preset.name = name;
    if (name == "table1") {
        for (int T : kSampleSizes) {
            preset.cells.push_back({FunctionalIID{}, T});
            preset.cells.push_back({FunctionalArch{}, T});
            preset.cells.push_back({FunctionalProductMA{}, T});
        }
    } else if (name == "table2") {
        preset.cells = matrix_cells(200);
    } else if (name == "supp-table5") {
        for (int T : {200, 400})
            for (int egp : {1, 2, 3}) preset.cells.push_back({GarchEgp{egp}, T});
    } else if (name == "supp-table6") {
        add_vector_cells(preset.cells, [](int d) { return DgpSpec(IIDNormal{d}); });
    } else if (name == "supp-table7") {
        add_vector_cells(preset.cells, [](int d) { return DgpSpec(IIDStudentT{d, 2.0}); });
        add_vector_cells(preset.cells, [](int d) { return DgpSpec(IIDStudentT{d, 1.0}); });
    } else if (name == "supp-table8") {
        add_vector_cells(preset.cells,
                         [](int d) { return DgpSpec(ProductMA{d, InnovationLaw::normal()}); });
        add_vector_cells(preset.cells,
                         [](int d) { return DgpSpec(ProductMA{d, InnovationLaw::student_t(2.0)}); });
    } else if (name == "supp-table9") {
        add_vector_cells(preset.cells,
                         [](int d) { return DgpSpec(ComponentGarch{d, InnovationLaw::normal()}); });
        add_vector_cells(preset.cells, [](int d) {
            return DgpSpec(ComponentGarch{d, InnovationLaw::student_t(2.0)});
        });
    } else if (name == "supp-table10") {
        add_vector_cells(preset.cells,
                         [](int d) { return DgpSpec(VAR1{d, 0.3, InnovationLaw::normal()}); });
        add_vector_cells(preset.cells,
                         [](int d) { return DgpSpec(VAR1{d, 0.3, InnovationLaw::student_t(2.0)}); });
    } else if (name == "supp-table11") {
        preset.cells = matrix_cells(100);
    } else {
        throw std::invalid_argument("unknown preset: " + name);
    }
    return preset;
}

} // namespace autohsic
