#include "nlr/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "nlr/baselines.hpp"
#include "nlr/datagen.hpp"
#include "nlr/flops.hpp"
#include "nlr/gri.hpp"
#include "nlr/grsvd.hpp"
#include "nlr/kernels.hpp"
#include "nlr/matrix_io.hpp"
#include "nlr/rangefinder.hpp"

namespace nlr::bench {

namespace {

const std::vector<std::string> kSvdMethods = {"GRSVD", "RSVD", "ARRF", "randQB-EI",
                                              "dense-SVD"};
const std::vector<std::string> kInvMethods = {"GRI-left", "GRI-right", "dense-inverse", "ARRF",
                                              "randQB-EI"};

bool contains(const std::vector<std::string>& v, const std::string& s) {
    return std::find(v.begin(), v.end(), s) != v.end();
}

[[noreturn]] void config_error(const std::string& origin, std::size_t line,
                               const std::string& message) {
    throw FormatError(origin + ":" + std::to_string(line) + ": " + message, line);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b == std::string::npos) continue;
        out.push_back(item.substr(b, e - b + 1));
    }
    return out;
}

}  // namespace

BenchConfig parse_bench_config_text(const std::string& text, const std::string& origin) {
    BenchConfig config;
    ExperimentSpec* current = nullptr;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;

    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        const auto e = line.find_last_not_of(" \t\r");
        line = line.substr(b, e - b + 1);

        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3)
                config_error(origin, line_no, "malformed section header");
            config.experiments.emplace_back();
            current = &config.experiments.back();
            current->name = line.substr(1, line.size() - 2);
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos) config_error(origin, line_no, "expected key = value");
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        const auto trim = [](std::string& s) {
            const auto bb = s.find_first_not_of(" \t");
            const auto ee = s.find_last_not_of(" \t");
            s = (bb == std::string::npos) ? std::string() : s.substr(bb, ee - bb + 1);
        };
        trim(key);
        trim(value);
        if (key.empty() || value.empty())
            config_error(origin, line_no, "empty key or value");

        const auto to_int = [&](const std::string& v) -> index_t {
            try {
                std::size_t used = 0;
                const long long x = std::stoll(v, &used);
                if (used != v.size()) throw std::invalid_argument(v);
                return static_cast<index_t>(x);
            } catch (const std::exception&) {
                config_error(origin, line_no, "bad integer '" + v + "' for key '" + key + "'");
            }
        };
        const auto to_double = [&](const std::string& v) -> double {
            try {
                std::size_t used = 0;
                const double x = std::stod(v, &used);
                if (used != v.size()) throw std::invalid_argument(v);
                return x;
            } catch (const std::exception&) {
                config_error(origin, line_no, "bad number '" + v + "' for key '" + key + "'");
            }
        };
        const auto to_double_list = [&](const std::string& v) {
            std::vector<double> out;
            for (const auto& item : split_list(v)) out.push_back(to_double(item));
            if (out.empty()) config_error(origin, line_no, "empty list for key '" + key + "'");
            return out;
        };

        if (!current) {
            if (key == "threads") {
                config.threads = to_int(value);
                continue;
            }
            config_error(origin, line_no, "key '" + key + "' before any [section]");
        }

        if (key == "kind") {
            if (value == "svd")
                current->kind = ExperimentSpec::Kind::svd;
            else if (value == "inv")
                current->kind = ExperimentSpec::Kind::inv;
            else
                config_error(origin, line_no, "kind must be 'svd' or 'inv'");
        } else if (key == "family") {
            if (value != "near_low_rank" && value != "file")
                config_error(origin, line_no, "family must be 'near_low_rank' or 'file'");
            current->family = value;
        } else if (key == "path") {
            current->path = value;
        } else if (key == "m") {
            current->m = to_int(value);
        } else if (key == "n") {
            current->n = to_int(value);
        } else if (key == "r") {
            current->r = to_int(value);
        } else if (key == "tail") {
            current->tail = to_double(value);
        } else if (key == "eps") {
            current->eps_list = to_double_list(value);
        } else if (key == "block") {
            current->block = to_int(value);
        } else if (key == "lambda") {
            current->lambdas = to_double_list(value);
        } else if (key == "methods") {
            current->methods = split_list(value);
        } else if (key == "trials") {
            current->trials = to_int(value);
        } else if (key == "seed") {
            current->seed = static_cast<std::uint64_t>(to_int(value));
        } else if (key == "ell") {
            current->ell = to_int(value);
        } else if (key == "ell_frac") {
            current->ell_frac = to_double(value);
        } else if (key == "probes") {
            current->probes = to_int(value);
        } else if (key == "arrf_tol_rel") {
            current->arrf_tol_rel = to_double(value);
        } else {
            config_error(origin, line_no, "unknown key '" + key + "'");
        }
    }

    if (config.experiments.empty())
        throw FormatError(origin + ": config defines no experiments");
    for (const auto& exp : config.experiments) {
        if (exp.eps_list.empty())
            throw FormatError(origin + ": section '" + exp.name + "' is missing eps");
        if (exp.methods.empty())
            throw FormatError(origin + ": section '" + exp.name + "' is missing methods");
        const auto& allowed =
            exp.kind == ExperimentSpec::Kind::svd ? kSvdMethods : kInvMethods;
        for (const auto& method : exp.methods)
            if (!contains(allowed, method))
                throw FormatError(origin + ": section '" + exp.name + "': method '" + method +
                                  "' is not valid for this kind");
        if (exp.kind == ExperimentSpec::Kind::inv && exp.lambdas.empty())
            throw FormatError(origin + ": section '" + exp.name + "' is missing lambda");
        if (exp.family == "near_low_rank") {
            if (exp.m < 1 || exp.n < 1 || exp.r < 1)
                throw FormatError(origin + ": section '" + exp.name + "' needs m, n, r");
        } else if (exp.path.empty()) {
            throw FormatError(origin + ": section '" + exp.name + "' needs path");
        }
        if (exp.trials < 1)
            throw FormatError(origin + ": section '" + exp.name + "': trials must be >= 1");
    }
    return config;
}

BenchConfig parse_bench_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("bench config: cannot open " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_bench_config_text(buffer.str(), path.string());
}

namespace {

struct Instance {
    RealMatrix a;
    std::vector<double> oracle_sv;
    double a_fro = 0.0;
};

struct CellTask {
    const ExperimentSpec* exp;
    index_t trial;
    std::size_t first_slot;  // canonical slot of this trial's first record
};

Instance make_instance(const ExperimentSpec& exp, index_t trial) {
    Instance inst;
    if (exp.family == "near_low_rank") {
        inst.a = near_low_rank(exp.m, exp.n, exp.r, exp.tail,
                               RngStream{exp.seed, 2 * static_cast<std::uint64_t>(trial)});
    } else {
        inst.a = expect_real(read_matrix(exp.path));
    }
    inst.oracle_sv = singular_values(inst.a);
    inst.a_fro = frobenius_norm(inst.a);
    return inst;
}

SvdApprox<double> truncate_dense_svd(const SvdResult<double>& svd, index_t k) {
    SvdApprox<double> f;
    f.k = k;
    f.u = svd.u.left_cols(k);
    f.sigma.assign(svd.sigma.begin(), svd.sigma.begin() + k);
    f.vh = Matrix<double>(k, svd.vh.cols());
    for (index_t j = 0; j < svd.vh.cols(); ++j)
        for (index_t i = 0; i < k; ++i) f.vh(i, j) = svd.vh(i, j);
    return f;
}

ErrorReport svd_report(const Instance& inst, const SvdApprox<double>& f, double eps) {
    ErrorReport rep;
    rep.k = f.k;
    rep.e_mse = reconstruction_error(inst.a, reconstruct(f));
    const index_t r_eps = eps_rank_from_singulars(inst.oracle_sv, eps);
    const index_t r_used = std::min<index_t>(f.k, r_eps);
    rep.e_sigma = singular_value_error(inst.oracle_sv, f.sigma, r_used);
    if (f.k > 0) {
        rep.e_u = orthogonality_defect(f.u);
        rep.e_v = orthogonality_defect(hermitian_transpose(f.vh));
    }
    rep.energy_ratio = energy_ratio(
        inst.oracle_sv, std::min<index_t>(f.k, static_cast<index_t>(inst.oracle_sv.size())));
    return rep;
}

// (lambda I + A_hat A_hat^H)^{-1} through a truncated SVD factorization:
// (1/lambda) I + W (diag(1/(lambda + sigma^2)) - (1/lambda) I) W^H with
// W = U (left side) or V (right side).
RealMatrix svd_based_inverse(const SvdApprox<double>& f, double lambda, GramSide side) {
    const RealMatrix w = side == GramSide::left_gram ? f.u : hermitian_transpose(f.vh);
    const index_t dim = w.rows();
    RealMatrix out = scale(RealMatrix::identity(dim), 1.0 / lambda);
    if (f.k == 0) return out;
    RealMatrix wd = w;
    for (index_t j = 0; j < f.k; ++j) {
        const double s = f.sigma[static_cast<std::size_t>(j)];
        const double d = 1.0 / (lambda + s * s) - 1.0 / lambda;
        for (index_t i = 0; i < dim; ++i) wd(i, j) *= d;
    }
    gemm_view<double>(Op::none, Op::conj_trans, dim, dim, f.k, 1.0, wd.data(), wd.rows(),
                      w.data(), w.rows(), 1.0, out.data(), out.rows());
    return out;
}

struct DenseRefs {
    RealMatrix left;   // (lambda I_m + A A^H)^{-1}
    RealMatrix right;  // (lambda I_n + A^H A)^{-1}
};

DenseRefs make_dense_refs(const RealMatrix& a, double lambda) {
    DenseRefs refs;
    RealMatrix left = matmul_op(Op::none, a, Op::conj_trans, a);
    for (index_t i = 0; i < left.rows(); ++i) left(i, i) += lambda;
    refs.left = dense_inverse(left);
    RealMatrix right = matmul_op(Op::conj_trans, a, Op::none, a);
    for (index_t i = 0; i < right.rows(); ++i) right(i, i) += lambda;
    refs.right = dense_inverse(right);
    return refs;
}

double rel_inverse_error(const RealMatrix& approx, const RealMatrix& ref, double a_fro) {
    return frobenius_norm(subtract(ref, approx)) / a_fro;
}

void run_trial(const ExperimentSpec& exp, index_t trial, std::vector<BenchRecord>& records,
               std::size_t first_slot) {
    const Instance inst = make_instance(exp, trial);
    const std::uint64_t method_stream_id = 2 * static_cast<std::uint64_t>(trial) + 1;
    const RngStream mstream{exp.seed, method_stream_id};
    std::size_t slot = first_slot;

    for (double eps : exp.eps_list) {
        const double arrf_tol =
            (exp.arrf_tol_rel > 0 ? exp.arrf_tol_rel : std::sqrt(eps)) * inst.a_fro;
        const index_t p = std::min(inst.a.rows(), inst.a.cols());
        const index_t rsvd_ell =
            exp.ell > 0 ? exp.ell
                        : std::max<index_t>(
                              1, static_cast<index_t>(std::llround(exp.ell_frac *
                                                                   static_cast<double>(p))));

        if (exp.kind == ExperimentSpec::Kind::svd) {
            for (const auto& method : exp.methods) {
                BenchRecord rec;
                rec.method = method;
                rec.m = inst.a.rows();
                rec.n = inst.a.cols();
                rec.eps = eps;
                rec.block = exp.block;
                rec.seed = method_stream_id;

                flops::Scope scope;
                const auto t0 = std::chrono::steady_clock::now();
                SvdApprox<double> f;
                if (method == "GRSVD") {
                    f = grsvd(inst.a, eps, exp.block, mstream);
                } else if (method == "RSVD") {
                    f = rsvd_fixed_rank(inst.a, std::min(rsvd_ell, p), mstream);
                } else if (method == "ARRF") {
                    RangeBasis<double> rb = arrf(inst.a, arrf_tol, exp.probes, mstream);
                    f = svd_from_basis(inst.a, rb.q, eps);
                } else if (method == "randQB-EI") {
                    QbResult<double> qb = randqb_ei(inst.a, eps, exp.block, mstream);
                    f = svd_from_qb(qb.q, qb.b, eps);
                } else {  // dense-SVD
                    SvdResult<double> svd = thin_svd(inst.a);
                    f = truncate_dense_svd(svd, eps_rank_from_singulars(svd.sigma, eps));
                    f.eps = eps;
                }
                const auto t1 = std::chrono::steady_clock::now();
                rec.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
                rec.flop_proxy = scope.elapsed();
                rec.report = svd_report(inst, f, eps);
                rec.k_detected = f.k;
                records[slot++] = std::move(rec);
            }
            continue;
        }

        for (double lambda : exp.lambdas) {
            const DenseRefs refs = make_dense_refs(inst.a, lambda);
            for (const auto& method : exp.methods) {
                BenchRecord rec;
                rec.method = method;
                rec.m = inst.a.rows();
                rec.n = inst.a.cols();
                rec.eps = eps;
                rec.block = exp.block;
                rec.seed = method_stream_id;

                flops::Scope scope;
                const auto t0 = std::chrono::steady_clock::now();
                double err_left = 0.0, err_right = 0.0;
                index_t k = 0;
                if (method == "GRI-left") {
                    RegularizedInverse<double> p_inv =
                        gri_left(inst.a, lambda, eps, exp.block, mstream);
                    RealMatrix mat = materialize(p_inv);
                    const auto t1 = std::chrono::steady_clock::now();
                    rec.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
                    err_left = rel_inverse_error(mat, refs.left, inst.a_fro);
                    k = p_inv.k;
                } else if (method == "GRI-right") {
                    RegularizedInverse<double> p_inv =
                        gri_right(inst.a, lambda, eps, exp.block, mstream);
                    RealMatrix mat = materialize(p_inv);
                    const auto t1 = std::chrono::steady_clock::now();
                    rec.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
                    err_right = rel_inverse_error(mat, refs.right, inst.a_fro);
                    k = p_inv.k;
                } else if (method == "dense-inverse") {
                    const DenseRefs own = make_dense_refs(inst.a, lambda);
                    const auto t1 = std::chrono::steady_clock::now();
                    rec.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
                    err_left = rel_inverse_error(own.left, refs.left, inst.a_fro);
                    err_right = rel_inverse_error(own.right, refs.right, inst.a_fro);
                    k = p;
                } else {
                    // ARRF / randQB-EI invert through their truncated SVD.
                    SvdApprox<double> f;
                    if (method == "ARRF") {
                        RangeBasis<double> rb = arrf(inst.a, arrf_tol, exp.probes, mstream);
                        f = svd_from_basis(inst.a, rb.q, eps);
                    } else {
                        QbResult<double> qb = randqb_ei(inst.a, eps, exp.block, mstream);
                        f = svd_from_qb(qb.q, qb.b, eps);
                    }
                    RealMatrix left = svd_based_inverse(f, lambda, GramSide::left_gram);
                    RealMatrix right = svd_based_inverse(f, lambda, GramSide::right_gram);
                    const auto t1 = std::chrono::steady_clock::now();
                    rec.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
                    err_left = rel_inverse_error(left, refs.left, inst.a_fro);
                    err_right = rel_inverse_error(right, refs.right, inst.a_fro);
                    k = f.k;
                }
                rec.flop_proxy = scope.elapsed();
                rec.k_detected = k;
                rec.report.k = k;
                rec.report.e_u = err_left;
                rec.report.e_v = err_right;
                rec.report.e_mse = std::max(err_left, err_right);
                rec.report.energy_ratio = energy_ratio(
                    inst.oracle_sv,
                    std::min<index_t>(k, static_cast<index_t>(inst.oracle_sv.size())));
                records[slot++] = std::move(rec);
            }
        }
    }
}

}  // namespace

std::vector<BenchRecord> bench_run(const BenchConfig& config) {
    std::vector<CellTask> tasks;
    std::size_t total_records = 0;
    for (const auto& exp : config.experiments) {
        const std::size_t per_trial =
            exp.eps_list.size() * exp.methods.size() *
            (exp.kind == ExperimentSpec::Kind::inv ? exp.lambdas.size() : 1);
        for (index_t trial = 0; trial < exp.trials; ++trial) {
            tasks.push_back({&exp, trial, 0});
            tasks.back().first_slot = total_records;
            total_records += per_trial;
        }
    }

    // Canonical order is experiment -> trial -> eps (-> lambda) -> method;
    // slots are preassigned so the merge is deterministic under parallelism.
    std::vector<BenchRecord> records(total_records);
    const index_t threads = std::max<index_t>(1, config.threads);
    if (threads == 1) {
        for (const auto& task : tasks) run_trial(*task.exp, task.trial, records, task.first_slot);
        return records;
    }

    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::mutex error_mutex;
    std::exception_ptr first_error;
    for (index_t t = 0; t < threads; ++t) {
        pool.emplace_back([&]() {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= tasks.size()) return;
                try {
                    run_trial(*tasks[i].exp, tasks[i].trial, records, tasks[i].first_slot);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& worker : pool) worker.join();
    if (first_error) std::rethrow_exception(first_error);
    return records;
}

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void write_records_csv(const std::filesystem::path& path,
                       const std::vector<BenchRecord>& records) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw FormatError("write_records_csv: cannot open " + path.string());
    out << "method,m,n,eps,block,seed,k_detected,e_mse,e_sigma,e_u,e_v,energy_ratio,"
           "wall_seconds,flop_proxy\n";
    for (const auto& r : records) {
        out << r.method << ',' << r.m << ',' << r.n << ',' << fmt(r.eps) << ',' << r.block << ','
            << r.seed << ',' << r.k_detected << ',' << fmt(r.report.e_mse) << ','
            << fmt(r.report.e_sigma) << ',' << fmt(r.report.e_u) << ',' << fmt(r.report.e_v)
            << ',' << fmt(r.report.energy_ratio) << ',' << fmt(r.wall_seconds) << ','
            << r.flop_proxy << '\n';
    }
    if (!out) throw FormatError("write_records_csv: write failed for " + path.string());
}

void write_aggregates(const std::filesystem::path& records_path, const BenchConfig& config,
                      const std::vector<BenchRecord>& records) {
    // Re-derive the canonical slot layout to attribute records to experiments.
    struct GroupKey {
        std::string exp;
        double eps;
        std::string method;
        bool operator<(const GroupKey& o) const {
            return std::tie(exp, eps, method) < std::tie(o.exp, o.eps, o.method);
        }
    };
    struct Agg {
        index_t r = 0;
        std::vector<double> e_mse, e_sigma, e_uv, e_u, e_v, wall;
        std::vector<std::uint64_t> flops;
        bool is_svd = true;
    };
    std::map<GroupKey, Agg> groups;

    std::size_t slot = 0;
    for (const auto& exp : config.experiments) {
        for (index_t trial = 0; trial < exp.trials; ++trial) {
            for (double eps : exp.eps_list) {
                const std::size_t lambda_count =
                    exp.kind == ExperimentSpec::Kind::inv ? exp.lambdas.size() : 1;
                for (std::size_t li = 0; li < lambda_count; ++li) {
                    for (const auto& method : exp.methods) {
                        const BenchRecord& rec = records.at(slot++);
                        Agg& agg = groups[GroupKey{exp.name, eps, method}];
                        agg.r = exp.r;
                        agg.is_svd = exp.kind == ExperimentSpec::Kind::svd;
                        agg.e_mse.push_back(rec.report.e_mse);
                        agg.e_sigma.push_back(rec.report.e_sigma);
                        agg.e_uv.push_back(std::max(rec.report.e_u, rec.report.e_v));
                        agg.e_u.push_back(rec.report.e_u);
                        agg.e_v.push_back(rec.report.e_v);
                        agg.wall.push_back(rec.wall_seconds);
                        agg.flops.push_back(rec.flop_proxy);
                    }
                }
            }
        }
    }

    const auto mean = [](const std::vector<double>& v) {
        double acc = 0.0;
        for (double x : v) acc += x;
        return v.empty() ? 0.0 : acc / static_cast<double>(v.size());
    };
    const auto median = [](std::vector<double> v) {
        if (v.empty()) return 0.0;
        std::sort(v.begin(), v.end());
        const std::size_t h = v.size() / 2;
        return v.size() % 2 ? v[h] : (v[h - 1] + v[h]) / 2.0;
    };

    const std::string stem = (records_path.parent_path() / records_path.stem()).string();
    bool any_svd = false, any_inv = false;
    for (const auto& [key, agg] : groups) (agg.is_svd ? any_svd : any_inv) = true;

    if (any_svd) {
        std::ofstream out(stem + ".svd-summary.csv", std::ios::trunc);
        out << "r_eps,method,E_MSE,E_Sigma,max_EU_EV\n";
        for (const auto& [key, agg] : groups)
            if (agg.is_svd)
                out << agg.r << ',' << key.method << ',' << fmt(mean(agg.e_mse)) << ','
                    << fmt(mean(agg.e_sigma)) << ',' << fmt(mean(agg.e_uv)) << '\n';
    }
    if (any_inv) {
        std::ofstream out(stem + ".inv-summary.csv", std::ios::trunc);
        out << "r,method,E_U,E_V\n";
        // GRI-left/GRI-right rows merge into one GRI row, matching the usual
        // side-by-side presentation.
        std::map<std::pair<std::string, double>, std::pair<double, double>> gri;
        for (const auto& [key, agg] : groups) {
            if (agg.is_svd) continue;
            if (key.method == "GRI-left") {
                gri[{key.exp, key.eps}].first = mean(agg.e_u);
            } else if (key.method == "GRI-right") {
                gri[{key.exp, key.eps}].second = mean(agg.e_v);
            } else {
                out << agg.r << ',' << key.method << ',' << fmt(mean(agg.e_u)) << ','
                    << fmt(mean(agg.e_v)) << '\n';
            }
        }
        for (const auto& [key, agg] : groups) {
            if (agg.is_svd || key.method != "GRI-left") continue;
            const auto& [eu, ev] = gri[{key.exp, key.eps}];
            out << agg.r << ",GRI," << fmt(eu) << ',' << fmt(ev) << '\n';
        }
    }
    {
        std::ofstream out(stem + ".timing.csv", std::ios::trunc);
        out << "experiment,eps,method,mean_wall_seconds,median_wall_seconds,mean_flop_proxy\n";
        for (const auto& [key, agg] : groups) {
            double flops_mean = 0.0;
            for (std::uint64_t f : agg.flops) flops_mean += static_cast<double>(f);
            if (!agg.flops.empty()) flops_mean /= static_cast<double>(agg.flops.size());
            out << key.exp << ',' << fmt(key.eps) << ',' << key.method << ','
                << fmt(mean(agg.wall)) << ',' << fmt(median(agg.wall)) << ','
                << fmt(flops_mean) << '\n';
        }
    }
}

}  // namespace nlr::bench
