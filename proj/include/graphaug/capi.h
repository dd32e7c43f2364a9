/* GraphAug C API: opaque handles + status codes over the C++ core.
 *
 * Every function returns GA_OK (0) on success or a negative status code;
 * ga_error_message() returns a thread-local description of the last failure.
 * Stage functions take a JSON configuration string (documented in README.md)
 * and an output directory; they write checkpoints, CSV reports and a
 * summary.json there.
 */
#ifndef GRAPHAUG_CAPI_H
#define GRAPHAUG_CAPI_H

#include <stdint.h>

#if defined(_WIN32)
#define GRAPHAUG_API __declspec(dllexport)
#else
#define GRAPHAUG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ga_status {
  GA_OK = 0,
  GA_ERROR_INVALID_ARGUMENT = -1,
  GA_ERROR_IO = -2,
  GA_ERROR_PARSE = -3,
  GA_ERROR_STATE = -4,      /* missing prerequisite (e.g. earlier stage checkpoint) */
  GA_ERROR_DIVERGED = -5,   /* non-finite loss/gradients */
  GA_ERROR_INTERNAL = -6
} ga_status;

GRAPHAUG_API const char* ga_version(void);

/* Thread-local message for the most recent failure in this thread. */
GRAPHAUG_API const char* ga_error_message(void);

/* --- datasets -------------------------------------------------------------- */

typedef struct ga_dataset ga_dataset;

/* kind: "colors" | "triangles". Node counts are inclusive bounds. */
GRAPHAUG_API ga_status ga_dataset_generate(const char* kind, int n_graphs, int min_nodes,
                                           int max_nodes, uint64_t seed, ga_dataset** out);

/* Serialized graphaug dataset file (see README for the text format). */
GRAPHAUG_API ga_status ga_dataset_open(const char* path, ga_dataset** out);

/* Directory holding a TU-format flat-file family (<DS>_A.txt, ...). */
GRAPHAUG_API ga_status ga_dataset_open_tu(const char* directory, ga_dataset** out);

GRAPHAUG_API ga_status ga_dataset_save(const ga_dataset* dataset, const char* path);
GRAPHAUG_API void ga_dataset_close(ga_dataset* dataset);

GRAPHAUG_API int ga_dataset_num_graphs(const ga_dataset* dataset);
GRAPHAUG_API int ga_dataset_num_classes(const ga_dataset* dataset);
GRAPHAUG_API int ga_dataset_feature_dim(const ga_dataset* dataset);
/* Label of graph `index` in {1..k}, or 0 if index is out of range. */
GRAPHAUG_API int ga_dataset_label(const ga_dataset* dataset, int index);

/* --- experiment stages ------------------------------------------------------ */

GRAPHAUG_API ga_status ga_gen_data(const char* config_json, const char* out_dir);
GRAPHAUG_API ga_status ga_train_reward(const char* config_json, const char* out_dir);
GRAPHAUG_API ga_status ga_train_policy(const char* config_json, const char* out_dir);
GRAPHAUG_API ga_status ga_train_classifier(const char* config_json, const char* out_dir);
GRAPHAUG_API ga_status ga_reproduce(const char* config_json, const char* out_dir);

#ifdef __cplusplus
}
#endif

#endif /* GRAPHAUG_CAPI_H */
