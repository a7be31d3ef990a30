#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "citedist/citation_distance.hpp"
#include "citedist/cli.hpp"
#include "citedist/collab_graph.hpp"
#include "citedist/indices.hpp"

namespace py = pybind11;
using namespace citedist;

namespace {

/// None stands for an infinite distance.
std::vector<Distance> to_distances(const std::vector<std::optional<std::uint32_t>>& ds)
{
    std::vector<Distance> out;
    out.reserve(ds.size());
    for (const auto& d : ds)
        out.push_back(d ? Distance::finite(*d) : Distance::infinite());
    return out;
}

DistanceCounts to_counts(const std::vector<std::optional<std::uint32_t>>& ds)
{
    DistanceCounts counts;
    for (const auto& d : to_distances(ds))
        counts.add(d);
    return counts;
}

} // namespace

PYBIND11_MODULE(_citedist, m)
{
    m.doc() = "Collaboration-distance citation indices";

    m.def(
        "weight", [](std::optional<std::uint32_t> d, std::uint32_t n) {
            return weight(d ? Distance::finite(*d) : Distance::infinite(), n);
        },
        py::arg("d"), py::arg("n") = 6, "Citation weight for a distance (None = infinite).");

    m.def(
        "c_index", [](const std::vector<std::optional<std::uint32_t>>& ds, double alpha) {
            return c_index(to_distances(ds), alpha);
        },
        py::arg("distances"), py::arg("alpha") = 1.0, "c-index of citation distances (None = infinite).");

    m.def(
        "x_index", [](const std::vector<std::optional<std::uint32_t>>& ds, std::uint32_t n) {
            return x_increment(to_counts(ds), n).value();
        },
        py::arg("distances"), py::arg("n") = 6, "Weighted citation sum of citation distances.");

    m.def(
        "x_index_2dp", [](const std::vector<std::optional<std::uint32_t>>& ds, std::uint32_t n) {
            return x_increment(to_counts(ds), n).to_string_2dp();
        },
        py::arg("distances"), py::arg("n") = 6, "x-index rendered to two decimals.");

    m.def(
        "h_index", [](const std::vector<std::uint64_t>& c) { return h_index(c); }, py::arg("citations"));
    m.def(
        "g_index", [](const std::vector<std::uint64_t>& c) { return g_index(c); }, py::arg("citations"));

    m.def(
        "run_cli", [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            int code;
            {
                py::gil_scoped_release release;
                code = cli_main(args, out, err);
            }
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Runs the command line; returns (exit code, stdout, stderr).");
}
