/*
 * Copyright 2026 The Jigsaw-RL Authors
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
 */

#ifndef JIGSAW_JIGSAW_H_
#define JIGSAW_JIGSAW_H_

/* C interface to the jigsaw library. Structured data crosses the boundary as
 * UTF-8 JSON text. Strings returned through `char** out` are owned by the
 * caller and released with jgs_free. On failure a function returns a non-zero
 * status and jgs_last_error() describes it (per thread). */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define JGS_API __declspec(dllexport)
#else
#define JGS_API __attribute__((visibility("default")))
#endif

typedef enum jgs_status {
  JGS_OK = 0,
  JGS_INVALID_ARGUMENT = 1,
  JGS_CONFIG_ERROR = 2,
  JGS_IO_ERROR = 3,
  JGS_NOT_FOUND = 4,
  JGS_INVALID_INPUT = 5,
  JGS_CONFLICT = 6,
  JGS_INTERNAL = 7
} jgs_status;

typedef struct jgs_manifest jgs_manifest;
typedef struct jgs_server jgs_server;

JGS_API const char* jgs_version(void);
/* Message of the last failed call on this thread, "" if none. */
JGS_API const char* jgs_last_error(void);
JGS_API void jgs_free(char* str);

/* Builds a dataset. `config_json` uses the keys corpus, out, kind, grid or
 * mix, mode, count, seed, transpose50, mask_gap, patch_scale, box_semantics
 * and jobs. `report_out` (may be NULL) receives a JSON summary. */
JGS_API jgs_status jgs_generate(const char* config_json, char** report_out);

JGS_API jgs_status jgs_manifest_load(const char* path, jgs_manifest** out);
JGS_API void jgs_manifest_free(jgs_manifest* manifest);
JGS_API size_t jgs_manifest_size(const jgs_manifest* manifest);
/* Record `index` as one JSON object. */
JGS_API jgs_status jgs_manifest_record(const jgs_manifest* manifest, size_t index, char** json_out);

/* Scores a responses JSONL file. `records_out` receives JSONL with one line
 * per scored response; `summary_out` a JSON object with mean rewards. Either
 * may be NULL. */
JGS_API jgs_status jgs_score(const jgs_manifest* manifest, const char* responses_path, char** records_out,
                             char** summary_out);

/* As jgs_score, plus the accuracy table as JSON and as aligned text. */
JGS_API jgs_status jgs_evaluate(const jgs_manifest* manifest, const char* responses_path, char** records_out,
                                char** table_json_out, char** table_text_out);

/* Keyword frequencies and completion lengths per step. `keywords_json` may be
 * NULL for the built-in lists, else {"backtracking":[...],
 * "backward_chaining":[...]}. */
JGS_API jgs_status jgs_analyze(const char* responses_path, const char* keywords_json, double alpha,
                               char** analysis_out);

/* Same bodies and replies as POST /v1/score and /v1/learning-signal, without
 * a server. `manifest` may be NULL when every item carries its question.
 * `http_status_out` may be NULL. */
JGS_API jgs_status jgs_score_json(const jgs_manifest* manifest, const char* request_json, char** reply_out,
                                  int* http_status_out);
JGS_API jgs_status jgs_learning_signal_json(const char* request_json, char** reply_out, int* http_status_out);

/* `config_json` keys: host, port, batch_cap, token, data_root, log_requests,
 * manifest (path). */
JGS_API jgs_status jgs_server_create(const char* config_json, jgs_server** out);
/* Binds and stores the bound port in `port_out` (may be NULL). */
JGS_API jgs_status jgs_server_bind(jgs_server* server, int* port_out);
/* Blocks until jgs_server_stop. */
JGS_API jgs_status jgs_server_run(jgs_server* server);
JGS_API void jgs_server_stop(jgs_server* server);
JGS_API void jgs_server_free(jgs_server* server);

#ifdef __cplusplus
}
#endif

#endif /* JIGSAW_JIGSAW_H_ */
