/* C interface for the concavelift library.
 *
 * All functions returning clift_status set a thread-local error message
 * retrievable via clift_last_error() on failure. Strings returned through
 * out-parameters are heap-allocated JSON documents; release them with
 * clift_string_free().
 */
#ifndef CONCAVELIFT_H
#define CONCAVELIFT_H

#ifdef __cplusplus
extern "C" {
#endif

typedef struct clift_operator clift_operator;

typedef enum {
  CLIFT_OK = 0,
  CLIFT_ERR_DISAGREEMENT = 1, /* theorem clauses disagree */
  CLIFT_ERR_PARSE = 2,        /* malformed spec or parameters */
  CLIFT_ERR_NUMERIC = 3,      /* numeric failure (no convergence, not PSD, ...) */
  CLIFT_ERR_PRECONDITION = 4  /* operation precondition violated */
} clift_status;

/* Build an operator from an OperatorSpecFile v1 JSON document. */
clift_status clift_operator_from_json(const char* spec_json, clift_operator** out);
void clift_operator_free(clift_operator* op);

/* Dimension of the operator's domain; -1 on null input. */
int clift_operator_dim(const clift_operator* op);

/* Serialize the operator back to a dense OperatorSpecFile v1 document. */
clift_status clift_operator_to_json(const clift_operator* op, char** out_json);

/* params: {"tol": 1e-8, "margin": 0, "order": 4}; all optional. */
clift_status clift_classify(const clift_operator* op, const char* params_json, char** out_json);

/* params: {"method": "basic"|"minimal"|"regular", "depth": 8, "tol": ...,
 * "margin": ..., "majorant": <matrix>, "include_matrices": false}. */
clift_status clift_lift(const clift_operator* op, const char* params_json, char** out_json);

/* params: {"theorem": "2.3"|"3.1"|"3.3"|"3.4"|"4.1"|"4.4b"|"4.6",
 * "order": ..., "depth": ..., "samples": ..., "seed": ..., "tol": ...,
 * "margin": ...}. Returns CLIFT_ERR_DISAGREEMENT when clauses disagree. */
clift_status clift_verify(const clift_operator* op, const char* params_json, char** out_json);

/* params: {"name": "brownian"|"dirichlet"|"weighted_shift"|
 * "regular_concave_scalar"|"two_hypercontraction", "seed": ..., ...};
 * writes an OperatorSpecFile v1 document. */
clift_status clift_generate(const char* params_json, char** out_json);

void clift_string_free(char* s);

/* Message and symbolic code of the last failure on this thread. */
const char* clift_last_error(void);
const char* clift_last_error_code(void);

#ifdef __cplusplus
}
#endif

#endif /* CONCAVELIFT_H */
