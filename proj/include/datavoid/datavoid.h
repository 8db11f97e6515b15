// Copyright 2026 The Datavoid Authors
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

/* C interface to the datavoid analysis library.
 *
 * Every function returns a dv_status. On failure the message is available
 * from dv_last_error() on the same thread until the next call. Strings
 * returned through char** outputs are owned by the caller and released with
 * dv_string_free(). Output pointers may be NULL when the result is not
 * wanted.
 */
#ifndef DATAVOID_H
#define DATAVOID_H

#include <stdint.h>

#if defined(_WIN32)
#define DV_API __declspec(dllexport)
#else
#define DV_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dv_status {
  DV_OK = 0,
  DV_ERR_VALIDATION = 1,
  DV_ERR_FATAL = 2,
  DV_ERR_NOT_FOUND = 3,
  DV_ERR_CONFLICT = 4,
  DV_ERR_INVALID_ARGUMENT = 5
} dv_status;

typedef struct dv_pipeline dv_pipeline;
typedef struct dv_service dv_service;

DV_API const char* dv_version(void);
DV_API const char* dv_last_error(void);
DV_API const char* dv_status_name(dv_status status);
DV_API void dv_string_free(char* s);

/* Pipeline from a JSON job config; relative paths resolve against base_dir
 * (may be NULL). */
DV_API dv_status dv_pipeline_create(const char* config_json, const char* base_dir,
                                    dv_pipeline** out);
/* Pipeline over the conventional corpus directory layout. options_json (may
 * be NULL) is merged over the defaults, e.g. {"k":5,"strict":true}. */
DV_API dv_status dv_pipeline_create_for_corpus(const char* corpus_dir,
                                               const char* topics_path,
                                               const char* out_dir,
                                               const char* options_json,
                                               dv_pipeline** out);
DV_API void dv_pipeline_free(dv_pipeline* p);

DV_API dv_status dv_pipeline_config(dv_pipeline* p, char** config_json);
DV_API dv_status dv_pipeline_validate(dv_pipeline* p);

/* Stages. Each runs any earlier stage it still needs. */
DV_API dv_status dv_pipeline_ingest(dv_pipeline* p, char** report_json);
DV_API dv_status dv_pipeline_categorize(dv_pipeline* p, char** categories_json);
DV_API dv_status dv_pipeline_train(dv_pipeline* p, char** report_json);
DV_API dv_status dv_pipeline_annotate(dv_pipeline* p, char** report_json);
DV_API dv_status dv_pipeline_report(dv_pipeline* p, char** summary_json);

/* Precision, recall, accuracy and F1 as percentages. */
DV_API dv_status dv_compute_metrics(uint64_t tp, uint64_t fp, uint64_t fn, uint64_t tn,
                                    char** metrics_json);

/* Service over the pipeline's job config. Builds the first snapshot, which
 * runs every stage. Honors DATAVOID_DATA_DIR and DATAVOID_API_TOKEN. */
DV_API dv_status dv_service_create(dv_pipeline* p, dv_service** out);
DV_API void dv_service_free(dv_service* s);

/* In-process request; query is "a=1&b=2" or NULL. */
DV_API dv_status dv_service_handle(dv_service* s, const char* method, const char* path,
                                   const char* query, const char* body,
                                   int* http_status, char** response_body);

DV_API dv_status dv_service_start(dv_service* s, const char* host, int port,
                                  int* bound_port);
DV_API dv_status dv_service_wait(dv_service* s);
DV_API dv_status dv_service_stop(dv_service* s);

#ifdef __cplusplus
}
#endif

#endif /* DATAVOID_H */
