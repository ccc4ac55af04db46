/* C interface to the ztk core: opaque context, JSON payloads, error codes. */
#ifndef ZTK_C_H
#define ZTK_C_H

#ifdef __cplusplus
extern "C" {
#endif

typedef struct ztk_ctx ztk_ctx;

enum {
    ZTK_OK = 0,
    ZTK_EFAIL = 1,  /* a computation or verification suite failed */
    ZTK_EUSAGE = 2  /* invalid parameters or configuration */
};

ztk_ctx* ztk_ctx_new(void);
void ztk_ctx_free(ztk_ctx* ctx);

/* Set a configuration key: S (comma-separated primes, must contain 2),
 * padic_digits, contour_height, contour_step, tolerance, series_cutoff,
 * seed, format.  Returns ZTK_OK or ZTK_EUSAGE. */
int ztk_ctx_set(ztk_ctx* ctx, const char* key, const char* value);

/* Evaluate one request.  The request is a JSON object with an "op" field
 * (kl, lfun, afe_check, sigma_square, padic); the response is a JSON object
 * {"records": [...]} where every numeric record carries value,
 * error_estimate and method.  *response_json must be released with
 * ztk_free.  Returns ZTK_OK, ZTK_EFAIL or ZTK_EUSAGE. */
int ztk_eval(ztk_ctx* ctx, const char* request_json, char** response_json);

/* Run a named verification suite (crt, weil, kl-vanishing, mellin, afe,
 * fe-involution, sigma-square, local-integral, moebius, heights) and write
 * a JSON report.  Returns ZTK_OK when the suite passes, ZTK_EFAIL when it
 * fails, ZTK_EUSAGE for an unknown suite. */
int ztk_verify(ztk_ctx* ctx, const char* suite, char** report_json);

/* Message for the most recent failure on this context. */
const char* ztk_last_error(const ztk_ctx* ctx);

void ztk_free(char* str);

#ifdef __cplusplus
}
#endif

#endif /* ZTK_C_H */
