/* C API for the scene-enhancement pipeline.
 *
 * The pipeline lives behind an opaque handle created from a JSON config
 * document. Every command returns a status code; on failure a human-readable
 * message is available via nice_last_error(). Summary strings returned through
 * out-parameters are JSON documents owned by the caller: release them with
 * nice_string_free().
 */
#ifndef NICE_C_H
#define NICE_C_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nice_status {
    NICE_OK = 0,
    NICE_ERROR_CONFIG = 1,   /* bad config / arguments */
    NICE_ERROR_IO = 2,       /* filesystem or codec failure */
    NICE_ERROR_BACKEND = 3,  /* model backend unreachable or misbehaving */
    NICE_ERROR_PARTIAL = 4,  /* command finished but skipped some frames */
    NICE_ERROR_INTERNAL = 5, /* anything else */
} nice_status;

typedef struct nice_pipeline nice_pipeline;

const char* nice_version(void);

/* config_json may be NULL or "" for an all-defaults pipeline. */
nice_status nice_pipeline_create(const char* config_json, nice_pipeline** out_pipeline);
void nice_pipeline_destroy(nice_pipeline* pipeline);

/* Message for the most recent failing call on this handle. Owned by the
 * handle; valid until the next call on it. Passing NULL reports the most
 * recent nice_pipeline_create failure on the calling thread. */
const char* nice_last_error(const nice_pipeline* pipeline);

/* Build scene-graph caches for every frame of the dataset under out_root. */
nice_status nice_run_parse(nice_pipeline* pipeline, const char* dataset_root,
                           const char* out_root, char** out_summary_json);

/* Plan and execute edits; writes edited frames + manifests under out_root. */
nice_status nice_run_edit(nice_pipeline* pipeline, const char* dataset_root,
                          const char* out_root, char** out_summary_json);

/* kind is "ssim" | "fid" | "apa".
 * ssim: input_a / input_b are two dataset roots (pairs matched by frame id).
 * fid:  input_a is the generated root, input_b the reference root.
 * apa:  input_a is a JSON-lines samples file; input_b is ignored (may be NULL).
 */
nice_status nice_run_eval(nice_pipeline* pipeline, const char* kind, const char* input_a,
                          const char* input_b, const char* out_root, char** out_summary_json);

/* Render figures from the metric CSVs in run_dir. */
nice_status nice_run_report(nice_pipeline* pipeline, const char* run_dir,
                            char** out_summary_json);

void nice_string_free(char* text);

#ifdef __cplusplus
}
#endif

#endif /* NICE_C_H */
