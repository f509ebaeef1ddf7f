// SPDX-License-Identifier: Apache-2.0
//
// rotaf: Byzantine-robust over-the-air federated learning simulator
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rotaf/engine.hpp"
#include "rotaf/presets.hpp"
#include "rotaf/theory.hpp"

namespace py = pybind11;

namespace {

rotaf::ExperimentConfig config_from_text(const std::string& text) {
    return rotaf::ExperimentConfig::from_string(text, "<python>");
}

py::dict records_to_dict(const std::vector<rotaf::MetricsRecord>& records) {
    py::list t, train_loss, test_loss, test_acc, dist2_opt, groups_dropped, contaminated;
    for (const auto& rec : records) {
        t.append(rec.t);
        train_loss.append(rec.train_loss);
        test_loss.append(rec.test_loss);
        test_acc.append(rec.test_acc);
        if (rec.dist2_opt) dist2_opt.append(*rec.dist2_opt);
        else dist2_opt.append(py::none());
        groups_dropped.append(rec.groups_dropped);
        contaminated.append(rec.contaminated_groups);
    }
    py::dict out;
    out["t"] = t;
    out["train_loss"] = train_loss;
    out["test_loss"] = test_loss;
    out["test_acc"] = test_acc;
    out["dist2_opt"] = dist2_opt;
    out["groups_dropped"] = groups_dropped;
    out["contaminated_groups"] = contaminated;
    return out;
}

}  // namespace

PYBIND11_MODULE(_rotaf, m) {
    m.doc() = "Robust over-the-air federated learning simulator";

    m.def("smoothed_norm",
          [](const Eigen::VectorXd& x, double epsilon) { return rotaf::smoothed_norm(x, epsilon); },
          py::arg("x"), py::arg("epsilon"));

    m.def(
        "geomed",
        [](const std::vector<Eigen::VectorXd>& vectors, double epsilon, double tol,
           int max_iters) {
            rotaf::GeomedConfig cfg{epsilon, tol, max_iters};
            const auto result = rotaf::geomed(vectors, cfg);
            return py::make_tuple(result.value, result.converged, result.iterations);
        },
        py::arg("vectors"), py::arg("epsilon") = 1e-4, py::arg("tol") = 1e-6,
        py::arg("max_iters") = 100,
        "Smoothed Weiszfeld geometric median; returns (value, converged, iterations)");

    m.def(
        "resample",
        [](const std::vector<Eigen::VectorXd>& vectors, int s, std::uint64_t seed) {
            rotaf::RngStream rng(seed, 0, 0, rotaf::Draw::Resample);
            return rotaf::resample(vectors, s, rng);
        },
        py::arg("vectors"), py::arg("s"), py::arg("seed") = 0,
        "s-resampling: each output averages s inputs, every input used exactly s times");

    m.def("mean_aggregate", &rotaf::mean_aggregate, py::arg("vectors"));

    m.def("c_alpha", &rotaf::c_alpha, py::arg("alpha"));
    m.def("d_factor", &rotaf::d_factor, py::arg("g"), py::arg("s"));

    m.def(
        "load_idx",
        [](const std::string& images, const std::string& labels) {
            const auto ds = rotaf::load_idx(images, labels);
            Eigen::MatrixXf features(ds.size(), ds.dim());
            std::vector<int> ys(ds.size());
            for (int i = 0; i < ds.size(); ++i) {
                for (int j = 0; j < ds.dim(); ++j) features(i, j) = ds.features_of(i)[j];
                ys[i] = ds.label_of(i);
            }
            return py::make_tuple(features, ys);
        },
        py::arg("images_path"), py::arg("labels_path"),
        "Read an IDX image/label pair; returns (features [n x d] in [0,1], labels)");

    m.def("preset_names", &rotaf::preset_names);
    m.def("preset", [](const std::string& name) { return rotaf::preset(name).dump(); },
          py::arg("name"), "Canonical config text of a named preset");
    m.def("dump_config", [](const std::string& text) { return config_from_text(text).dump(); },
          py::arg("config_text"));

    m.def(
        "run_experiment",
        [](const std::string& config_text) {
            auto cfg = config_from_text(config_text);
            cfg.validate();
            rotaf::Experiment experiment(cfg);
            return records_to_dict(experiment.run());
        },
        py::arg("config_text"),
        "Run a full experiment from config text; returns per-evaluation metric columns");

    m.def(
        "validate_bound",
        [](const std::string& config_text, int n_seeds) {
            const auto check = rotaf::validate_bound(config_from_text(config_text), n_seeds);
            py::dict out;
            out["empirical"] = check.empirical;
            out["bound"] = check.bound;
            out["fraction_below"] = check.fraction_below;
            out["pass"] = check.pass;
            out["asymptotic_error"] = check.asymptotic_error;
            return out;
        },
        py::arg("config_text"), py::arg("n_seeds") = 20,
        "Seed-averaged distance-to-optimum versus the linear-rate bound curve");

    m.def(
        "asymptotic_error",
        [](double mu, double lipschitz, double delta2, double kappa2, double k2, double power,
           double sigma2, double h_min, int p, int m_clients, int g, int b, int s) {
            rotaf::TheoryConstants tc{mu, lipschitz, delta2, kappa2, k2, power,
                                      sigma2, h_min, p, m_clients, g, b, s, 0.0};
            return s > 1 ? rotaf::asymptotic_error_a2(tc) : rotaf::asymptotic_error_a1(tc);
        },
        py::arg("mu"), py::arg("lipschitz"), py::arg("delta2"), py::arg("kappa2"), py::arg("k2"),
        py::arg("power"), py::arg("sigma2"), py::arg("h_min"), py::arg("p"), py::arg("m"),
        py::arg("g"), py::arg("b"), py::arg("s") = 1);
}
