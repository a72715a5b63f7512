#include "contam/classifiers/svm.hpp"

#include "contam/core/error.hpp"
#include "contam/core/parallel.hpp"
#include "contam/core/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <list>
#include <stdexcept>
#include <unordered_map>

namespace contam::clf {

namespace {

constexpr double kTau = 1e-12;

// Least-recently-used cache of kernel matrix rows.
class KernelCache {
public:
    KernelCache(const Matrix& x, const KernelSpec& kernel, std::size_t bytes)
        : x_(x), kernel_(kernel), n_(static_cast<std::size_t>(x.rows())) {
        const std::size_t row_bytes = std::max<std::size_t>(1, n_ * sizeof(double));
        capacity_ = std::clamp<std::size_t>(bytes / row_bytes, 2, std::max<std::size_t>(2, n_));
        diag_.resize(n_);
        for (std::size_t i = 0; i < n_; ++i) diag_[i] = kernel_(row_span(x_, i), row_span(x_, i));
    }

    double diag(std::size_t i) const { return diag_[i]; }

    const std::vector<double>& row(std::size_t i) {
        if (auto it = index_.find(i); it != index_.end()) {
            order_.splice(order_.begin(), order_, it->second);
            return it->second->values;
        }
        if (order_.size() >= capacity_) {
            index_.erase(order_.back().row);
            order_.splice(order_.begin(), order_, std::prev(order_.end()));
        } else {
            order_.emplace_front();
            order_.front().values.resize(n_);
        }
        Entry& e = order_.front();
        e.row = i;
        const auto xi = row_span(x_, i);
        for (std::size_t k = 0; k < n_; ++k) e.values[k] = kernel_(xi, row_span(x_, k));
        index_[i] = order_.begin();
        return e.values;
    }

private:
    struct Entry {
        std::size_t row = 0;
        std::vector<double> values;
    };
    const Matrix& x_;
    const KernelSpec& kernel_;
    std::size_t n_;
    std::size_t capacity_;
    std::vector<double> diag_;
    std::list<Entry> order_;
    std::unordered_map<std::size_t, std::list<Entry>::iterator> index_;
};

bool in_up(int y, double a, double C) { return (y > 0 && a < C) || (y < 0 && a > 0); }
bool in_low(int y, double a, double C) { return (y > 0 && a > 0) || (y < 0 && a < C); }

double dual_objective(const std::vector<double>& alpha, const std::vector<double>& grad) {
    double f = 0;
    for (std::size_t i = 0; i < alpha.size(); ++i) f += alpha[i] * (grad[i] - 1);
    return -0.5 * f;
}

}  // namespace

DualSolution solve_dual(const Matrix& x, std::span<const int> y, const KernelSpec& kernel, double C, double tol,
                        std::size_t max_iterations, std::uint64_t seed, std::size_t cache_bytes,
                        bool record_objective) {
    const std::size_t n = y.size();
    if (static_cast<std::size_t>(x.rows()) != n) throw SchemaError("solve_dual: rows and targets differ");
    if (!(C > 0)) throw DomainError("C must be > 0");
    if (!(tol > 0)) throw DomainError("tol must be > 0");

    KernelCache cache(x, kernel, cache_bytes);
    Rng rng(seed, 0x53);
    DualSolution sol;
    std::vector<double>& alpha = sol.alpha;
    alpha.assign(n, 0.0);
    // gradient of ½αᵀQα - eᵀα with Q_ij = y_i y_j K_ij
    std::vector<double> grad(n, -1.0);
    if (record_objective) sol.objective_trace.push_back(0.0);

    auto update_pair = [&](std::size_t i, std::size_t j) {
        const auto& ki = cache.row(i);
        const auto& kj = cache.row(j);
        const double old_i = alpha[i];
        const double old_j = alpha[j];
        const double qij = y[i] * y[j] * ki[j];
        if (y[i] != y[j]) {
            double quad = cache.diag(i) + cache.diag(j) + 2 * qij;
            if (quad <= 0) quad = kTau;
            const double delta = (-grad[i] - grad[j]) / quad;
            const double diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if (diff > 0) {
                if (alpha[j] < 0) { alpha[j] = 0; alpha[i] = diff; }
            } else if (alpha[i] < 0) {
                alpha[i] = 0;
                alpha[j] = -diff;
            }
            if (diff > 0) {
                if (alpha[i] > C) { alpha[i] = C; alpha[j] = C - diff; }
            } else if (alpha[j] > C) {
                alpha[j] = C;
                alpha[i] = C + diff;
            }
        } else {
            double quad = cache.diag(i) + cache.diag(j) - 2 * qij;
            if (quad <= 0) quad = kTau;
            const double delta = (grad[i] - grad[j]) / quad;
            const double sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if (sum > C) {
                if (alpha[i] > C) { alpha[i] = C; alpha[j] = sum - C; }
            } else if (alpha[j] < 0) {
                alpha[j] = 0;
                alpha[i] = sum;
            }
            if (sum > C) {
                if (alpha[j] > C) { alpha[j] = C; alpha[i] = sum - C; }
            } else if (alpha[i] < 0) {
                alpha[i] = 0;
                alpha[j] = sum;
            }
        }
        const double di = alpha[i] - old_i;
        const double dj = alpha[j] - old_j;
        if (di == 0 && dj == 0) return false;
        // ki is still resident: fetching row j evicts at most one other row
        for (std::size_t k = 0; k < n; ++k) {
            grad[k] += y[k] * (y[i] * ki[k] * di + y[j] * kj[k] * dj);
        }
        return true;
    };

    const std::size_t cap = std::max<std::size_t>(1, max_iterations);
    while (sol.iterations < cap) {
        double gmax = -std::numeric_limits<double>::infinity();
        double gmin = std::numeric_limits<double>::infinity();
        std::size_t i = n, j = n;
        for (std::size_t t = 0; t < n; ++t) {
            const double v = -y[t] * grad[t];
            if (in_up(y[t], alpha[t], C) && v >= gmax) { gmax = v; i = t; }
            if (in_low(y[t], alpha[t], C) && v <= gmin) { gmin = v; j = t; }
        }
        if (i == n || j == n || gmax - gmin < tol) {
            sol.converged = true;
            break;
        }
        ++sol.iterations;
        if (!update_pair(i, j)) {
            std::vector<std::size_t> partners;
            for (std::size_t t = 0; t < n; ++t) {
                if (t != i && in_low(y[t], alpha[t], C) && gmax + y[t] * grad[t] >= tol) partners.push_back(t);
            }
            bool moved = false;
            if (!partners.empty()) moved = update_pair(i, partners[rng.below(partners.size())]);
            if (!moved) {
                // no pair can move: numerically optimal
                sol.converged = true;
                break;
            }
        }
        if (record_objective) sol.objective_trace.push_back(dual_objective(alpha, grad));
    }

    // ρ from free vectors, else the midpoint of the feasible interval
    double upper = std::numeric_limits<double>::infinity();
    double lower = -std::numeric_limits<double>::infinity();
    double free_sum = 0;
    std::size_t free_count = 0;
    for (std::size_t t = 0; t < n; ++t) {
        const double yg = y[t] * grad[t];
        if (alpha[t] >= C) {
            if (y[t] < 0) upper = std::min(upper, yg); else lower = std::max(lower, yg);
        } else if (alpha[t] <= 0) {
            if (y[t] > 0) upper = std::min(upper, yg); else lower = std::max(lower, yg);
        } else {
            free_sum += yg;
            ++free_count;
        }
    }
    double rho = 0;
    if (free_count > 0) {
        rho = free_sum / static_cast<double>(free_count);
    } else if (std::isfinite(upper) && std::isfinite(lower)) {
        rho = 0.5 * (upper + lower);
    } else {
        rho = std::isfinite(upper) ? upper : (std::isfinite(lower) ? lower : 0.0);
    }
    sol.bias = -rho;
    return sol;
}

double BinarySvm::decision(std::span<const double> x, const KernelSpec& kernel) const {
    double f = bias;
    for (std::size_t s = 0; s < coef.size(); ++s) f += coef[s] * kernel(row_span(support_vectors, s), x);
    return f;
}

bool SvmModel::converged() const {
    return std::all_of(machines.begin(), machines.end(), [](const BinarySvm& m) { return m.converged; });
}

double SvmModel::decision(std::span<const double> x) const {
    if (machines.empty()) throw std::logic_error("SVM model has no machines");
    return machines.front().decision(x, kernel);
}

int SvmModel::predict(std::span<const double> x) const {
    if (machines.size() == 1) {
        const auto& m = machines.front();
        return m.decision(x, kernel) > 0 ? m.positive_class : m.negative_class;
    }
    std::vector<int> votes(static_cast<std::size_t>(class_count), 0);
    std::vector<double> strength(static_cast<std::size_t>(class_count), 0.0);
    for (const auto& m : machines) {
        const double f = m.decision(x, kernel);
        const int winner = f > 0 ? m.positive_class : m.negative_class;
        ++votes[static_cast<std::size_t>(winner)];
        strength[static_cast<std::size_t>(winner)] += std::abs(f);
    }
    int best = 0;
    for (int c = 1; c < class_count; ++c) {
        const auto cu = static_cast<std::size_t>(c);
        const auto bu = static_cast<std::size_t>(best);
        if (votes[cu] > votes[bu] || (votes[cu] == votes[bu] && strength[cu] > strength[bu])) best = c;
    }
    return best;
}

std::vector<int> SvmModel::predict(const Matrix& x) const {
    std::vector<int> out(static_cast<std::size_t>(x.rows()));
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = predict(row_span(x, i));
    return out;
}

SvmModel svm_train(const data::LabeledDataset& train, const SvmParams& params) {
    params.kernel.validate();
    if (!(params.C > 0)) throw DomainError("C must be > 0");
    if (!(params.tol > 0)) throw DomainError("tol must be > 0");
    if (train.size() < 2) throw SchemaError("SVM training needs n >= 2");
    const auto counts = train.class_counts();
    std::vector<int> present;
    for (int c = 0; c < train.class_count(); ++c) {
        if (counts[static_cast<std::size_t>(c)] > 0) present.push_back(c);
    }
    if (present.size() < 2) throw SchemaError("SVM training needs at least two classes present");

    std::vector<std::pair<int, int>> pairs;
    for (std::size_t a = 0; a < present.size(); ++a) {
        for (std::size_t b = a + 1; b < present.size(); ++b) pairs.emplace_back(present[a], present[b]);
    }

    SvmModel model;
    model.kernel = params.kernel;
    model.C = params.C;
    model.class_count = train.class_count();
    model.dim = train.dim();
    model.machines.resize(pairs.size());

    parallel_for(pairs.size(), params.workers, [&](std::size_t k) {
        const auto [neg, pos] = pairs[k];
        std::vector<std::size_t> rows;
        std::vector<int> y;
        for (std::size_t i = 0; i < train.size(); ++i) {
            if (train.label(i) == neg || train.label(i) == pos) {
                rows.push_back(i);
                y.push_back(train.label(i) == pos ? 1 : -1);
            }
        }
        Matrix x(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(train.dim()));
        for (std::size_t r = 0; r < rows.size(); ++r) {
            x.row(static_cast<Eigen::Index>(r)) = train.features().row(static_cast<Eigen::Index>(rows[r]));
        }
        const auto sol = solve_dual(x, y, params.kernel, params.C, params.tol, params.max_passes * rows.size(),
                                    derive_seed({params.seed, static_cast<std::uint64_t>(k)}), params.cache_bytes,
                                    params.record_objective);
        BinarySvm m;
        m.negative_class = neg;
        m.positive_class = pos;
        m.bias = sol.bias;
        m.converged = sol.converged;
        m.iterations = sol.iterations;
        m.objective_trace = sol.objective_trace;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (sol.alpha[r] > 0) {
                m.coef.push_back(sol.alpha[r] * y[r]);
                m.support_indices.push_back(rows[r]);
            }
        }
        if (m.coef.empty()) throw std::logic_error("SVM solution without support vectors");
        double balance = 0;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (sol.alpha[r] < 0 || sol.alpha[r] > params.C) throw std::logic_error("SVM dual left the box");
            balance += sol.alpha[r] * y[r];
        }
        if (std::abs(balance) > 1e-6 * params.C) throw std::logic_error("SVM dual violates sum(alpha*y) = 0");
        m.support_vectors.resize(static_cast<Eigen::Index>(m.coef.size()), static_cast<Eigen::Index>(train.dim()));
        for (std::size_t s = 0; s < m.support_indices.size(); ++s) {
            m.support_vectors.row(static_cast<Eigen::Index>(s)) =
                train.features().row(static_cast<Eigen::Index>(m.support_indices[s]));
        }
        model.machines[k] = std::move(m);
    });
    return model;
}

nlohmann::json SvmModel::to_json() const {
    nlohmann::json j;
    j["type"] = "svm";
    j["kernel"] = kernel.to_json();
    j["C"] = C;
    j["class_count"] = class_count;
    j["dim"] = dim;
    j["converged"] = converged();
    j["machines"] = nlohmann::json::array();
    for (const auto& m : machines) {
        nlohmann::json mj;
        mj["negative_class"] = m.negative_class;
        mj["positive_class"] = m.positive_class;
        mj["bias"] = m.bias;
        mj["converged"] = m.converged;
        mj["iterations"] = m.iterations;
        mj["coef"] = m.coef;
        mj["support_indices"] = m.support_indices;
        auto svs = nlohmann::json::array();
        for (Eigen::Index r = 0; r < m.support_vectors.rows(); ++r) {
            const auto row = row_span(m.support_vectors, static_cast<std::size_t>(r));
            svs.push_back(std::vector<double>(row.begin(), row.end()));
        }
        mj["support_vectors"] = std::move(svs);
        j["machines"].push_back(std::move(mj));
    }
    return j;
}

SvmModel SvmModel::from_json(const nlohmann::json& j) {
    SvmModel model;
    try {
        model.kernel = KernelSpec::from_json(j.at("kernel"));
        model.C = j.at("C").get<double>();
        model.class_count = j.at("class_count").get<int>();
        model.dim = j.at("dim").get<std::size_t>();
        for (const auto& mj : j.at("machines")) {
            BinarySvm m;
            m.negative_class = mj.at("negative_class").get<int>();
            m.positive_class = mj.at("positive_class").get<int>();
            m.bias = mj.at("bias").get<double>();
            m.converged = mj.at("converged").get<bool>();
            m.iterations = mj.value("iterations", std::size_t{0});
            m.coef = mj.at("coef").get<std::vector<double>>();
            m.support_indices = mj.value("support_indices", std::vector<std::size_t>{});
            const auto svs = mj.at("support_vectors").get<std::vector<std::vector<double>>>();
            if (svs.size() != m.coef.size()) throw SchemaError("support vector count does not match coefficients");
            m.support_vectors.resize(static_cast<Eigen::Index>(svs.size()), static_cast<Eigen::Index>(model.dim));
            for (std::size_t r = 0; r < svs.size(); ++r) {
                if (svs[r].size() != model.dim) throw SchemaError("support vector has wrong dimension");
                for (std::size_t c = 0; c < model.dim; ++c) {
                    m.support_vectors(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = svs[r][c];
                }
            }
            model.machines.push_back(std::move(m));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("SVM model JSON: ") + e.what());
    }
    if (model.machines.empty()) throw SchemaError("SVM model has no machines");
    return model;
}

DualCheck check_dual(const SvmModel& model, const data::LabeledDataset& train) {
    DualCheck out;
    for (const auto& m : model.machines) {
        std::unordered_map<std::size_t, double> alpha;
        double balance = 0;
        for (std::size_t s = 0; s < m.coef.size(); ++s) {
            const double a = std::abs(m.coef[s]);
            alpha[m.support_indices[s]] = a;
            balance += m.coef[s];
            if (a < 0 || a > model.C * (1 + 1e-12)) out.box_feasible = false;
        }
        out.equality_residual = std::max(out.equality_residual, std::abs(balance));
        for (std::size_t i = 0; i < train.size(); ++i) {
            const int label = train.label(i);
            if (label != m.negative_class && label != m.positive_class) continue;
            const double y = label == m.positive_class ? 1.0 : -1.0;
            const double margin = y * m.decision(train.row(i), model.kernel);
            const auto it = alpha.find(i);
            const double a = it == alpha.end() ? 0.0 : it->second;
            double v = 0;
            if (a <= 0) {
                v = 1 - margin;
            } else if (a >= model.C) {
                v = margin - 1;
            } else {
                v = std::abs(margin - 1);
            }
            out.max_kkt_violation = std::max(out.max_kkt_violation, v);
        }
    }
    return out;
}

}  // namespace contam::clf
