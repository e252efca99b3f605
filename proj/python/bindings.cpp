/*
   Copyright 2026 The perronmc Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "perronmc/chain.hpp"
#include "perronmc/error.hpp"
#include "perronmc/estimator.hpp"
#include "perronmc/galton_watson.hpp"
#include "perronmc/matrix.hpp"
#include "perronmc/oracle.hpp"

namespace py = pybind11;
using namespace perronmc;

PYBIND11_MODULE(_perronmc, m)
{
    m.doc() = "Perron-Frobenius eigenpairs from Markov chain excursions (0-based states)";

    static py::exception<Error> error_type(m, "PerronmcError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p)
                std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object exc = py::reinterpret_borrow<py::object>(error_type.ptr())(e.what());
            exc.attr("kind") = std::string(to_string(e.kind()));
            PyErr_SetObject(error_type.ptr(), exc.ptr());
        }
    });

    py::class_<NonNegativeMatrix>(m, "NonNegativeMatrix")
        .def(py::init([](const std::vector<std::vector<double>>& rows) { return validate(rows); }),
             py::arg("rows"))
        .def_property_readonly("n", &NonNegativeMatrix::size)
        .def("rows", [](const NonNegativeMatrix& a) { return a.entries().to_rows(); })
        .def("__len__", &NonNegativeMatrix::size);

    m.def("scale", &scale, py::arg("a"), py::arg("c"));
    m.def("check_primitive", [](const NonNegativeMatrix& a) { return check_primitive(a).exponent_m; },
          "Smallest m with A^m > 0");

    py::class_<RowDecomposition>(m, "RowDecomposition")
        .def_readonly("fitness", &RowDecomposition::fitness)
        .def_property_readonly("kernel", [](const RowDecomposition& d) { return d.kernel.to_rows(); })
        .def("recompose", &RowDecomposition::recompose);
    m.def("decompose", &decompose, py::arg("a"));

    py::class_<PerronPair>(m, "PerronPair")
        .def_readonly("lam", &PerronPair::lambda)
        .def_readonly("u", &PerronPair::u)
        .def_readonly("iterations", &PerronPair::iterations);
    m.def("power_iteration", &power_iteration, py::arg("a"), py::arg("tol") = kPowerIterationTol,
          py::arg("max_iter") = kPowerIterationMaxIter);

    py::class_<LemmaSeries>(m, "LemmaSeries")
        .def_readonly("terms", &LemmaSeries::terms)
        .def_readonly("partial_sums", &LemmaSeries::partial_sums)
        .def_readonly("ratios", &LemmaSeries::ratios)
        .def_property_readonly("final_sum", &LemmaSeries::final_sum);
    m.def("lemma_partial_sums", &lemma_partial_sums, py::arg("a"), py::arg("k"), py::arg("lam"),
          py::arg("n_max"), py::arg("stop_below") = 0.0);

    py::class_<EquilibriumResidual>(m, "EquilibriumResidual")
        .def_readonly("per_state", &EquilibriumResidual::per_state)
        .def_readonly("max_abs", &EquilibriumResidual::max_abs)
        .def_readonly("mean_fitness", &EquilibriumResidual::mean_fitness);
    m.def("quasispecies_residual", &quasispecies_residual, py::arg("a"), py::arg("x"));

    py::class_<EstimateReport>(m, "EstimateReport")
        .def_readonly("lambda_hat", &EstimateReport::lambda_hat)
        .def_readonly("u_hat", &EstimateReport::u_hat)
        .def_readonly("base_state", &EstimateReport::base_state)
        .def_readonly("sample_count", &EstimateReport::sample_count)
        .def_readonly("attempted", &EstimateReport::attempted)
        .def_readonly("truncated_count", &EstimateReport::truncated_count)
        .def_readonly("g_residual", &EstimateReport::g_residual)
        .def_readonly("dispersion", &EstimateReport::dispersion)
        .def_readonly("lambda_dispersion", &EstimateReport::lambda_dispersion);
    m.def(
        "run_estimation",
        [](const NonNegativeMatrix& a, State k, std::size_t samples, std::uint64_t seed, std::size_t cap,
           std::size_t shards, double tol) {
            py::gil_scoped_release release;
            return run_estimation(a, EstimationConfig{k, samples, seed, cap, shards, tol});
        },
        py::arg("a"), py::arg("k") = 0, py::arg("samples") = 100'000, py::arg("seed") = 0,
        py::arg("cap") = kDefaultExcursionCap, py::arg("shards") = 1, py::arg("tol") = kDefaultBisectionTol);

    py::class_<TreeEnsemble>(m, "TreeEnsemble")
        .def_readonly("trials", &TreeEnsemble::trials)
        .def_readonly("survivors", &TreeEnsemble::survivors)
        .def_readonly("averaged", &TreeEnsemble::averaged)
        .def_readonly("pooled", &TreeEnsemble::pooled)
        .def_property_readonly("survival_fraction", &TreeEnsemble::survival_fraction);
    m.def(
        "conditioned_proportions",
        [](const NonNegativeMatrix& a, std::size_t trials, std::size_t horizon, std::uint64_t seed,
           const std::string& law) {
            BranchingOptions options;
            if (law == "deterministic")
                options.law = OffspringLaw::Deterministic;
            else if (law != "poisson")
                throw Error(ErrorKind::InvalidArgument, "law must be 'poisson' or 'deterministic'");
            py::gil_scoped_release release;
            return conditioned_proportions(a, trials, horizon, seed, options);
        },
        py::arg("a"), py::arg("trials") = 10'000, py::arg("horizon") = 10, py::arg("seed") = 0,
        py::arg("law") = "poisson");
}
