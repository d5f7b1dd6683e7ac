#include "osvd/osvd.h"

#include "osvd/datagen.hpp"
#include "osvd/decomposition.hpp"
#include "osvd/errors.hpp"
#include "osvd/io.hpp"
#include "osvd/metrics.hpp"
#include "osvd/parallel.hpp"
#include "osvd/randomized.hpp"

#include <cstring>
#include <new>
#include <string>

struct osvd_tensor {
    osvd::Tensor3 value;
};

struct osvd_factors {
    osvd::OsvdFactors value;
};

namespace {

thread_local std::string last_error;

osvd_status fail(osvd_status status, const char* what) {
    last_error = what;
    return status;
}

template <typename F>
osvd_status guarded(F&& body) {
    try {
        body();
        return OSVD_OK;
    } catch (const osvd::ValidationError& e) {
        return fail(OSVD_ERR_VALIDATION, e.what());
    } catch (const osvd::NumericalError& e) {
        return fail(OSVD_ERR_NUMERICAL, e.what());
    } catch (const osvd::IoError& e) {
        return fail(OSVD_ERR_IO, e.what());
    } catch (const std::bad_alloc&) {
        return fail(OSVD_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(OSVD_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(OSVD_ERR_INTERNAL, "unknown error");
    }
}

void require(bool ok, const char* message) {
    if (!ok) throw osvd::ValidationError(message);
}

osvd::Dims to_dims(const size_t dims[3]) {
    require(dims != nullptr, "dims must not be NULL");
    return {static_cast<osvd::Index>(dims[0]), static_cast<osvd::Index>(dims[1]), static_cast<osvd::Index>(dims[2])};
}

std::vector<osvd::Index> to_ranks(const size_t* values, size_t n, const char* name) {
    require(n == 0 || values != nullptr, name);
    std::vector<osvd::Index> out(n);
    for (size_t i = 0; i < n; ++i) out[i] = static_cast<osvd::Index>(values[i]);
    return out;
}

osvd::TruncationSpec to_spec(const osvd_truncation* spec) {
    require(spec != nullptr, "truncation spec must not be NULL");
    osvd::TruncationSpec s;
    s.k1 = static_cast<osvd::Index>(spec->k1);
    s.k2 = to_ranks(spec->k2, spec->k1, "truncation spec k2 must not be NULL");
    s.p = static_cast<osvd::Index>(spec->p);
    s.q0 = static_cast<osvd::Index>(spec->q0);
    s.q = to_ranks(spec->q, spec->k1, "truncation spec q must not be NULL");
    s.seed = spec->seed;
    return s;
}

template <typename T>
void require_handle(const T* h) {
    require(h != nullptr, "handle must not be NULL");
}

} // namespace

extern "C" {

const char* osvd_version(void) { return OSVD_VERSION_STRING; }

const char* osvd_last_error(void) { return last_error.c_str(); }

osvd_status osvd_tensor_create(const size_t dims[3], const double* data, osvd_tensor** out) {
    return guarded([&] {
        require(out != nullptr, "output pointer must not be NULL");
        const osvd::Dims d = to_dims(dims);
        osvd::Tensor3 t(d);
        if (data != nullptr) {
            t = osvd::Tensor3(d, std::vector<double>(data, data + t.size()));
        }
        *out = new osvd_tensor{std::move(t)};
    });
}

void osvd_tensor_free(osvd_tensor* t) { delete t; }

void osvd_tensor_dims(const osvd_tensor* t, size_t dims[3]) {
    for (int m = 0; m < 3; ++m) dims[m] = static_cast<size_t>(t->value.dims()[static_cast<std::size_t>(m)]);
}

const double* osvd_tensor_data(const osvd_tensor* t) { return t->value.data().data(); }

osvd_status osvd_tensor_load(const char* path, osvd_tensor** out) {
    return guarded([&] {
        require(path != nullptr && out != nullptr, "path and output must not be NULL");
        *out = new osvd_tensor{osvd::read_ot3(path)};
    });
}

osvd_status osvd_tensor_save(const osvd_tensor* t, const char* path) {
    return guarded([&] {
        require_handle(t);
        require(path != nullptr, "path must not be NULL");
        osvd::write_ot3(t->value, path);
    });
}

double osvd_tensor_frob_norm(const osvd_tensor* t) { return osvd::frob_norm(t->value); }

osvd_status osvd_tensor_rank3(const osvd_tensor* t, double tol, size_t* out) {
    return guarded([&] {
        require_handle(t);
        require(out != nullptr, "output must not be NULL");
        const osvd::Index r = tol < 0.0 ? osvd::rank3(t->value) : osvd::rank3(t->value, tol);
        *out = static_cast<size_t>(r);
    });
}

osvd_status osvd_generate(const size_t dims[3], size_t rank3, osvd_decay decay, size_t r2cap, uint64_t seed,
                          osvd_tensor** tensor, osvd_factors** truth) {
    return guarded([&] {
        require(tensor != nullptr, "output tensor must not be NULL");
        require(decay == OSVD_DECAY_SLOW || decay == OSVD_DECAY_FAST, "unknown decay kind");
        const osvd::Dims d = to_dims(dims);
        auto synth = osvd::synthetic_oriented(d[0], d[1], d[2], static_cast<osvd::Index>(rank3),
                                              decay == OSVD_DECAY_SLOW ? osvd::DecayKind::Slow : osvd::DecayKind::Fast,
                                              static_cast<osvd::Index>(r2cap), seed);
        auto* t = new osvd_tensor{std::move(synth.tensor)};
        if (truth != nullptr) {
            try {
                *truth = new osvd_factors{std::move(synth.truth)};
            } catch (...) {
                delete t;
                throw;
            }
        }
        *tensor = t;
    });
}

osvd_status osvd_decompose_full(const osvd_tensor* t, osvd_factors** out) {
    return guarded([&] {
        require_handle(t);
        require(out != nullptr, "output must not be NULL");
        *out = new osvd_factors{osvd::osvd_full(t->value)};
    });
}

osvd_status osvd_decompose_truncated(const osvd_tensor* t, size_t k1, const size_t* k2, osvd_factors** out) {
    return guarded([&] {
        require_handle(t);
        require(out != nullptr, "output must not be NULL");
        *out = new osvd_factors{osvd::tosvd(t->value, static_cast<osvd::Index>(k1), to_ranks(k2, k1, "k2 must not be NULL"))};
    });
}

osvd_status osvd_decompose_randomized(const osvd_tensor* t, const osvd_truncation* spec, osvd_factors** out) {
    return guarded([&] {
        require_handle(t);
        require(out != nullptr, "output must not be NULL");
        *out = new osvd_factors{osvd::rosvd(t->value, to_spec(spec))};
    });
}

void osvd_factors_free(osvd_factors* f) { delete f; }

void osvd_factors_shape(const osvd_factors* f, size_t dims[3], size_t* k1, size_t* k2max) {
    const osvd::Dims d = f->value.dims();
    if (dims != nullptr) {
        for (int m = 0; m < 3; ++m) dims[m] = static_cast<size_t>(d[static_cast<std::size_t>(m)]);
    }
    if (k1 != nullptr) *k1 = static_cast<size_t>(f->value.k1());
    if (k2max != nullptr) *k2max = static_cast<size_t>(f->value.k2max());
}

void osvd_factors_k2(const osvd_factors* f, size_t* k2) {
    for (std::size_t i = 0; i < f->value.k2.size(); ++i) k2[i] = static_cast<size_t>(f->value.k2[i]);
}

void osvd_factors_sigma3(const osvd_factors* f, double* sigma3) {
    std::memcpy(sigma3, f->value.sigma3.data(), sizeof(double) * static_cast<std::size_t>(f->value.sigma3.size()));
}

osvd_status osvd_factors_weight(const osvd_factors* f, size_t face, size_t slot, double* out) {
    return guarded([&] {
        require_handle(f);
        require(out != nullptr, "output must not be NULL");
        require(face >= 1 && face <= static_cast<size_t>(f->value.k1()), "face index out of range");
        require(slot >= 1 && slot <= static_cast<size_t>(f->value.k2max()), "slot index out of range");
        *out = f->value.weight(static_cast<osvd::Index>(face - 1), static_cast<osvd::Index>(slot - 1));
    });
}

osvd_timings osvd_factors_timings(const osvd_factors* f) {
    return {f->value.timings.stage1_seconds, f->value.timings.stage2_seconds};
}

size_t osvd_factors_warning_count(const osvd_factors* f) { return f->value.warnings.size(); }

const char* osvd_factors_warning(const osvd_factors* f, size_t index) {
    if (index >= f->value.warnings.size()) return nullptr;
    return f->value.warnings[index].c_str();
}

osvd_status osvd_factors_save(const osvd_factors* f, const char* dir, const char* extra_json) {
    return guarded([&] {
        require_handle(f);
        require(dir != nullptr, "directory must not be NULL");
        osvd::save_factors(f->value, dir, extra_json != nullptr ? extra_json : "");
    });
}

osvd_status osvd_factors_load(const char* dir, osvd_factors** out) {
    return guarded([&] {
        require(dir != nullptr && out != nullptr, "directory and output must not be NULL");
        *out = new osvd_factors{osvd::load_factors(dir)};
    });
}

osvd_status osvd_reconstruct(const osvd_factors* f, osvd_tensor** out) {
    return guarded([&] {
        require_handle(f);
        require(out != nullptr, "output must not be NULL");
        *out = new osvd_tensor{osvd::reconstruct(f->value)};
    });
}

osvd_status osvd_r_term_approx(const osvd_factors* full, size_t r, osvd_tensor** out) {
    return guarded([&] {
        require_handle(full);
        require(out != nullptr, "output must not be NULL");
        *out = new osvd_tensor{osvd::r_term_approx(full->value, static_cast<osvd::Index>(r))};
    });
}

osvd_status osvd_truncation_error(const osvd_factors* full, size_t k1, const size_t* k2, double* out) {
    return guarded([&] {
        require_handle(full);
        require(out != nullptr, "output must not be NULL");
        *out = osvd::truncation_error_exact(full->value, static_cast<osvd::Index>(k1),
                                            to_ranks(k2, k1, "k2 must not be NULL"));
    });
}

osvd_status osvd_error_bound(const osvd_factors* full, const osvd_truncation* spec, double* out) {
    return guarded([&] {
        require_handle(full);
        require(out != nullptr, "output must not be NULL");
        *out = osvd::expected_error_bound(full->value, to_spec(spec));
    });
}

osvd_status osvd_storage_cost(const size_t dims[3], size_t k1, size_t k2, uint64_t* out) {
    return guarded([&] {
        require(out != nullptr, "output must not be NULL");
        *out = osvd::storage_cost(to_dims(dims), static_cast<osvd::Index>(k1), static_cast<osvd::Index>(k2));
    });
}

osvd_status osvd_factors_storage_cost(const osvd_factors* f, uint64_t* out) {
    return guarded([&] {
        require_handle(f);
        require(out != nullptr, "output must not be NULL");
        *out = osvd::storage_cost(f->value);
    });
}

osvd_status osvd_quality_report(const osvd_tensor* original, const osvd_tensor* approx, uint64_t storage,
                                osvd_quality* out) {
    return guarded([&] {
        require_handle(original);
        require_handle(approx);
        require(out != nullptr, "output must not be NULL");
        const osvd::QualityReport r = osvd::quality_report(original->value, approx->value, storage);
        *out = {r.err, r.ratio, r.mse, r.psnr, r.ssim};
    });
}

const char* osvd_quality_csv_header(void) { return osvd::kQualityCsvHeader; }

size_t osvd_quality_csv_row(const osvd_quality* q, char* buf, size_t size) {
    const std::string row = osvd::to_csv_row({q->err, q->ratio, q->mse, q->psnr, q->ssim});
    if (buf != nullptr && size > 0) {
        const size_t n = std::min(size - 1, row.size());
        std::memcpy(buf, row.data(), n);
        buf[n] = '\0';
    }
    return row.size();
}

int osvd_worker_threads(void) { return osvd::worker_threads(); }

} // extern "C"
