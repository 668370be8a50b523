/*
 * Copyright (C) 2026 The mfgsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
*/

/* C interface to mfgsim. All strings returned through `char**` out
 * parameters are heap-allocated and must be released with
 * mfgsim_string_free(). On any status other than MFGSIM_OK the calling
 * thread's mfgsim_last_error() describes the failure. */

#ifndef MFGSIM_H
#define MFGSIM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define MFGSIM_API __declspec(dllexport)
#else
#define MFGSIM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mfgsim_status
{
  MFGSIM_OK = 0,
  /* The operation ran and reported errors in its output (diagnostics,
   * violations, uncovered entities). */
  MFGSIM_DIAGNOSTICS = 1,
  MFGSIM_INVALID_ARGUMENT = 2,
  MFGSIM_INTERNAL = 3,

  MFGSIM_DUPLICATE_SORT_SET = 10,
  MFGSIM_UNKNOWN_SORT_SET,
  MFGSIM_UNKNOWN_SORT,
  MFGSIM_CYCLE_INTRODUCED,
  MFGSIM_INVALID_IDENTIFIER,
  MFGSIM_DUPLICATE_ENTITY,
  MFGSIM_UNKNOWN_ENTITY,
  MFGSIM_MODEL_NOT_WELL_FORMED,
  MFGSIM_SORT_SYSTEM_MISMATCH,
  MFGSIM_UNKNOWN_CONCEPT,
  MFGSIM_NOT_ABSTRACTING,
  MFGSIM_NOT_REFINING,
  MFGSIM_UNMAPPED_SORT,
  MFGSIM_ORPHAN_ATTRIBUTE,
  MFGSIM_UNKNOWN_ATTRIBUTE,
  MFGSIM_NAME_CLASH,
  MFGSIM_NOT_FOUND,
  MFGSIM_PARSE_FAILED,
  MFGSIM_IO_ERROR,
  MFGSIM_CORRUPT_MANIFEST,
  MFGSIM_HASH_MISMATCH,
  MFGSIM_LOCK_HELD,
  MFGSIM_SCHEDULE_IN_PAST,
  MFGSIM_ACTION_PANIC,
  MFGSIM_ENGINE_FINISHED,
  MFGSIM_DEADLOCK_DETECTED,
  MFGSIM_VERIFICATION_FAILED,
  MFGSIM_MISSING_COMPONENT,
  MFGSIM_MODE_MISMATCH,
  MFGSIM_MODEL_MISMATCH,
  MFGSIM_INVALID_SCENARIO
} mfgsim_status;

typedef struct mfgsim_workspace mfgsim_workspace;

/* Message for the last failing call on this thread; never NULL. */
MFGSIM_API const char* mfgsim_last_error(void);
MFGSIM_API const char* mfgsim_status_name(int status);
MFGSIM_API void mfgsim_string_free(char* s);
MFGSIM_API const char* mfgsim_version(void);

/* Duration text such as "8h" or "250ms" to microseconds. */
MFGSIM_API int mfgsim_parse_duration(const char* text, int64_t* out_us);

/* ---- workspaces ------------------------------------------------------ */

/* On MFGSIM_PARSE_FAILED `*out` stays NULL and `*diagnostics` (if given)
 * holds one `file:line:col: severity: message` line per problem. */
MFGSIM_API int mfgsim_workspace_load(
  const char* path, mfgsim_workspace** out, char** diagnostics);
MFGSIM_API int mfgsim_workspace_parse(
  const char* text, const char* filename, const char* base_dir,
  mfgsim_workspace** out, char** diagnostics);
MFGSIM_API void mfgsim_workspace_free(mfgsim_workspace* ws);

/* Canonical text of the workspace. */
MFGSIM_API int mfgsim_workspace_print(const mfgsim_workspace* ws, char** out);

/* Well-formedness of `model`, or of every model when `model` is NULL.
 * MFGSIM_DIAGNOSTICS when any error is reported; warnings alone are OK. */
MFGSIM_API int mfgsim_check(const mfgsim_workspace* ws, const char* model, char** report);

/* Violations of `ontology` by `model` (NULL: every model on the ontology's
 * sort set), as text lines or a JSON document. */
MFGSIM_API int mfgsim_verify(
  const mfgsim_workspace* ws, const char* model, const char* ontology, int as_json,
  char** report);

/* format: "text" or "dot". */
MFGSIM_API int mfgsim_lattice(
  const mfgsim_workspace* ws, const char* model, const char* format, char** out);

/* The workspace with `model` (NULL: every model on the map's sort set)
 * rewritten; review notes go to `notes`. */
MFGSIM_API int mfgsim_abstract(
  const mfgsim_workspace* ws, const char* map, const char* model,
  mfgsim_workspace** out, char** notes);
MFGSIM_API int mfgsim_refine(
  const mfgsim_workspace* ws, const char* map, const char* expansion, const char* model,
  mfgsim_workspace** out, char** notes);
MFGSIM_API int mfgsim_view(
  const mfgsim_workspace* ws, const char* sort_set, const char* model,
  mfgsim_workspace** out);

/* `mapping` is looked up in `abstract_ws`, then in `detailed_ws`. */
MFGSIM_API int mfgsim_coordinate(
  const mfgsim_workspace* abstract_ws, const char* abstract_model,
  const mfgsim_workspace* detailed_ws, const char* detailed_model,
  const char* mapping, char** report);

/* ---- simulation ------------------------------------------------------ */

typedef struct mfgsim_run_options
{
  const char* mode;     /* "abstract", "detailed" or NULL for the scenario's */
  int use_seed;         /* nonzero: `seed` overrides the scenario seed */
  uint64_t seed;
  const char* horizon;  /* duration text or NULL */
  int64_t fleet;        /* 0 keeps the scenario fleet */
  int trace;            /* nonzero: produce the JSON-lines trace */
  const char* profile;  /* ontology name or NULL for "mfg_profile" */
} mfgsim_run_options;

MFGSIM_API void mfgsim_run_options_init(mfgsim_run_options* options);

/* Abstract-mode capacity estimate of the scenario's derived demand. */
MFGSIM_API int mfgsim_estimate(
  const mfgsim_workspace* ws, const char* scenario, const mfgsim_run_options* options,
  char** text);

/* `report_csv` columns: metric,entity,value,unit. `trace` may be NULL. */
MFGSIM_API int mfgsim_simulate(
  const mfgsim_workspace* ws, const char* scenario, const mfgsim_run_options* options,
  char** report_csv, char** trace);

/* Abstract estimate against a detailed run. MFGSIM_DIAGNOSTICS when a gap
 * exceeds `threshold`. */
MFGSIM_API int mfgsim_compare(
  const mfgsim_workspace* ws, const char* scenario, const mfgsim_run_options* options,
  double threshold, char** text, char** csv);

/* ---- model library --------------------------------------------------- */

/* kind: "primitive-set", "conceptualization", "model" or "result". */
MFGSIM_API int mfgsim_lib_store(
  const char* root, const char* kind, const char* name, const char* payload, size_t size,
  int64_t* version, char** content_hash);

/* version 0 loads the latest. */
MFGSIM_API int mfgsim_lib_load(
  const char* root, const char* kind, const char* name, int64_t version,
  char** payload, size_t* size, int64_t* loaded_version);

/* JSON array of {kind, name, version, content_hash, created_at}; `kind`
 * may be NULL. */
MFGSIM_API int mfgsim_lib_list(const char* root, const char* kind, char** json);

#ifdef __cplusplus
}
#endif

#endif /* MFGSIM_H */
