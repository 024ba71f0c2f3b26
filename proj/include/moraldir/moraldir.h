// Copyright 2026 The moraldir Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* C interface to the moraldir library: opaque handles, status codes, and a
 * thread-local last-error message. Every function that can fail returns an
 * md_status; output parameters are only written on MD_OK. */

#ifndef MORALDIR_MORALDIR_H_
#define MORALDIR_MORALDIR_H_

#include <stddef.h>

#if defined(_WIN32)
#  if defined(MORALDIR_BUILDING_SHARED)
#    define MD_API __declspec(dllexport)
#  else
#    define MD_API __declspec(dllimport)
#  endif
#else
#  define MD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes double as CLI exit codes. */
typedef enum md_status {
  MD_OK = 0,
  MD_ERR_USAGE = 2,
  MD_ERR_IO = 3,
  MD_ERR_PARSE = 4,
  MD_ERR_VALIDATION = 5,
  MD_ERR_NOT_FOUND = 6,
  MD_ERR_DEGENERATE = 7,
  MD_ERR_INSUFFICIENT_DATA = 8,
  MD_ERR_INSUFFICIENT_VARIANCE = 9,
  MD_ERR_PRECONDITION = 10,
  MD_ERR_DIMENSION_MISMATCH = 11,
  MD_ERR_INTERNAL = 70
} md_status;

typedef struct md_embedding_set md_embedding_set;
typedef struct md_model md_model;
typedef struct md_run_config md_run_config;

MD_API const char* md_version(void);

/* Machine-readable name of a status ("parse", "not_found", ...). */
MD_API const char* md_status_name(md_status status);

/* Message and "file:line" context of the last failure on this thread. The
 * pointers stay valid until the next failing call on the same thread. */
MD_API const char* md_last_error_message(void);
MD_API const char* md_last_error_context(void);

/* --- embedding sets ---------------------------------------------------- */

MD_API md_status md_embedding_set_load(const char* path, md_embedding_set** out);
MD_API void md_embedding_set_free(md_embedding_set* set);
MD_API size_t md_embedding_set_dim(const md_embedding_set* set);
MD_API size_t md_embedding_set_count(const md_embedding_set* set);
MD_API const char* md_embedding_set_model_id(const md_embedding_set* set);
MD_API const char* md_embedding_set_language(const md_embedding_set* set);
/* Id of the record at `index` in file order, or NULL when out of range. */
MD_API const char* md_embedding_set_id_at(const md_embedding_set* set, size_t index);
/* Copies the vector for `id` into out[0..out_len); out_len must equal dim. */
MD_API md_status md_embedding_set_lookup(const md_embedding_set* set, const char* id, double* out,
                                         size_t out_len);

/* --- moral direction models -------------------------------------------- */

/* Induces a model from prompt embeddings, a verbs CSV and a templates file. */
MD_API md_status md_model_induce(const md_embedding_set* set, const char* verbs_path,
                                 const char* templates_path, md_model** out);
MD_API md_status md_model_load(const char* path, md_model** out);
MD_API md_status md_model_save(const md_model* model, const char* path);
MD_API void md_model_free(md_model* model);
MD_API size_t md_model_dim(const md_model* model);
MD_API double md_model_normalizer(const md_model* model);
MD_API double md_model_explained_variance_ratio(const md_model* model);
/* Copies the unit direction into out[0..out_len); out_len must equal dim. */
MD_API md_status md_model_direction(const md_model* model, double* out, size_t out_len);
/* raw = <embedding - mean, direction>, score = raw / normalizer. Either
 * output pointer may be NULL. */
MD_API md_status md_model_score(const md_model* model, const double* embedding, size_t dim,
                                double* raw, double* score);

/* --- statistics --------------------------------------------------------- */

MD_API md_status md_pearson(const double* x, const double* y, size_t n, double* r);

/* --- subcommand runner -------------------------------------------------- */

/* Subcommands: expand, induce, score, mfq, diverge, correlate, variance. */
MD_API md_status md_run_config_new(const char* subcommand, md_run_config** out);
MD_API void md_run_config_free(md_run_config* config);
/* Option names are the CLI flag names without dashes, e.g. "top-k".
 * "table" may be given several times. */
MD_API md_status md_run_config_set(md_run_config* config, const char* key, const char* value);
/* Runs the subcommand and writes its reports into the --out directory. */
MD_API md_status md_run(md_run_config* config);
/* After md_run: warnings and written files, NULL past the end. */
MD_API const char* md_run_warning(const md_run_config* config, size_t index);
MD_API const char* md_run_output(const md_run_config* config, size_t index);

#ifdef __cplusplus
}  /* extern "C" */
#endif

#endif  /* MORALDIR_MORALDIR_H_ */
