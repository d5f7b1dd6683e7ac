/*
 * C interface to the oriented SVD library.
 *
 * Objects are opaque handles owned by the caller and released with the
 * matching *_free function. Every fallible call returns an osvd_status; on
 * failure osvd_last_error() describes the problem (thread-local, valid until
 * the next failing call on the same thread). Output handles are only written
 * on success.
 *
 * Indices and ranks are 1-based where they name faces or slots, matching the
 * usual A(:,:,k) notation; array arguments are plain C arrays.
 */
#ifndef OSVD_OSVD_H
#define OSVD_OSVD_H

#include <stddef.h>
#include <stdint.h>

#if defined(OSVD_BUILDING_LIBRARY)
#define OSVD_API __attribute__((visibility("default")))
#else
#define OSVD_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum osvd_status {
    OSVD_OK = 0,
    OSVD_ERR_VALIDATION = 2, /* bad arguments, shapes or ranks */
    OSVD_ERR_NUMERICAL = 3,  /* dense solver failure */
    OSVD_ERR_IO = 4,         /* file system or format errors */
    OSVD_ERR_INTERNAL = 5
} osvd_status;

typedef enum osvd_decay { OSVD_DECAY_SLOW = 0, OSVD_DECAY_FAST = 1 } osvd_decay;

typedef struct osvd_tensor osvd_tensor;
typedef struct osvd_factors osvd_factors;

/* Randomized O-SVD controls. k2 and q point at k1 entries each. */
typedef struct osvd_truncation {
    size_t k1;
    const size_t* k2;
    size_t p;
    size_t q0;
    const size_t* q;
    uint64_t seed;
} osvd_truncation;

typedef struct osvd_quality {
    double err;
    double ratio;
    double mse;
    double psnr; /* +inf for an exact reconstruction */
    double ssim;
} osvd_quality;

typedef struct osvd_timings {
    double stage1_seconds;
    double stage2_seconds;
} osvd_timings;

OSVD_API const char* osvd_version(void);
OSVD_API const char* osvd_last_error(void);

/* ---- tensors ---------------------------------------------------------- */

/* Copies dims[0]*dims[1]*dims[2] values (mode-1 fastest). data may be NULL for zeros. */
OSVD_API osvd_status osvd_tensor_create(const size_t dims[3], const double* data, osvd_tensor** out);
OSVD_API void osvd_tensor_free(osvd_tensor* t);
OSVD_API void osvd_tensor_dims(const osvd_tensor* t, size_t dims[3]);
/* Borrowed pointer to the tensor's storage; valid while the handle lives. */
OSVD_API const double* osvd_tensor_data(const osvd_tensor* t);
OSVD_API osvd_status osvd_tensor_load(const char* path, osvd_tensor** out);
OSVD_API osvd_status osvd_tensor_save(const osvd_tensor* t, const char* path);
OSVD_API double osvd_tensor_frob_norm(const osvd_tensor* t);
/* tol < 0 selects the default max(I3, I1*I2) * eps. */
OSVD_API osvd_status osvd_tensor_rank3(const osvd_tensor* t, double tol, size_t* out);

/* Synthetic oriented tensor; truth may be NULL when the construction factors are not needed. */
OSVD_API osvd_status osvd_generate(const size_t dims[3], size_t rank3, osvd_decay decay, size_t r2cap, uint64_t seed,
                                   osvd_tensor** tensor, osvd_factors** truth);

/* ---- decompositions --------------------------------------------------- */

OSVD_API osvd_status osvd_decompose_full(const osvd_tensor* t, osvd_factors** out);
OSVD_API osvd_status osvd_decompose_truncated(const osvd_tensor* t, size_t k1, const size_t* k2, osvd_factors** out);
OSVD_API osvd_status osvd_decompose_randomized(const osvd_tensor* t, const osvd_truncation* spec,
                                               osvd_factors** out);

OSVD_API void osvd_factors_free(osvd_factors* f);
/* dims of the represented tensor, face count k1 and padded slot count k2max. */
OSVD_API void osvd_factors_shape(const osvd_factors* f, size_t dims[3], size_t* k1, size_t* k2max);
/* Copies k1 entries. */
OSVD_API void osvd_factors_k2(const osvd_factors* f, size_t* k2);
OSVD_API void osvd_factors_sigma3(const osvd_factors* f, double* sigma3);
/* Weight s_jji for 1-based face i and slot j (zero past the face's rank). */
OSVD_API osvd_status osvd_factors_weight(const osvd_factors* f, size_t face, size_t slot, double* out);
OSVD_API osvd_timings osvd_factors_timings(const osvd_factors* f);
OSVD_API size_t osvd_factors_warning_count(const osvd_factors* f);
OSVD_API const char* osvd_factors_warning(const osvd_factors* f, size_t index);

/* extra_json (may be NULL) is stored verbatim in the factor manifest. */
OSVD_API osvd_status osvd_factors_save(const osvd_factors* f, const char* dir, const char* extra_json);
OSVD_API osvd_status osvd_factors_load(const char* dir, osvd_factors** out);

OSVD_API osvd_status osvd_reconstruct(const osvd_factors* f, osvd_tensor** out);
/* Sum of the r heaviest rank-1 terms. */
OSVD_API osvd_status osvd_r_term_approx(const osvd_factors* full, size_t r, osvd_tensor** out);

/* ---- error accounting ------------------------------------------------- */

/* Squared error of the (k1, k2) truncation from the weights of a full O-SVD. */
OSVD_API osvd_status osvd_truncation_error(const osvd_factors* full, size_t k1, const size_t* k2, double* out);
/* Expected-error bound of the randomized O-SVD (absolute Frobenius norm). */
OSVD_API osvd_status osvd_error_bound(const osvd_factors* full, const osvd_truncation* spec, double* out);
/* Factor storage k1*k2*(I1 + I2 + 1) + k1*I3. */
OSVD_API osvd_status osvd_storage_cost(const size_t dims[3], size_t k1, size_t k2, uint64_t* out);
OSVD_API osvd_status osvd_factors_storage_cost(const osvd_factors* f, uint64_t* out);

/* ---- metrics ---------------------------------------------------------- */

OSVD_API osvd_status osvd_quality_report(const osvd_tensor* original, const osvd_tensor* approx, uint64_t storage,
                                         osvd_quality* out);
OSVD_API const char* osvd_quality_csv_header(void);
/* Writes one CSV row (no newline) into buf; returns the length needed excluding NUL. */
OSVD_API size_t osvd_quality_csv_row(const osvd_quality* q, char* buf, size_t size);

/* Worker threads used by face loops (from OSVD_NUM_THREADS or the runtime default). */
OSVD_API int osvd_worker_threads(void);

#ifdef __cplusplus
}
#endif

#endif /* OSVD_OSVD_H */
