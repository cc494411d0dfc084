/* Minimal consumer of the C API.
 *
 * Build (from the repository root, after `cargo build -p afpcalc-ffi`):
 *   gcc -Icrates/afpcalc-ffi/include crates/afpcalc-ffi/examples/demo.c \
 *       -Ltarget/debug -lafpcalc_ffi -Wl,-rpath,$PWD/target/debug -o demo
 */
#include "afpcalc.h"
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

static const char *DOC =
    "algebra A {\n"
    "  summand a0 { kind = ifgf(2); weight = 1; }\n"
    "}\n"
    "\n"
    "algebra B {\n"
    "  summand b0 { kind = ifgf(2); weight = 1; }\n"
    "}\n"
    "\n"
    "algebra D {\n"
    "  summand d0 { kind = matrix(1); weight = 1; }\n"
    "}\n"
    "\n"
    "embed D into A {\n"
    "  d0 -> { a0: trace 1 };\n"
    "}\n"
    "\n"
    "embed D into B {\n"
    "  d0 -> { b0: trace 1 };\n"
    "}\n";

int main(void) {
    printf("afpcalc %s\n", afp_version());

    AfpProblem *problem = NULL;
    AfpCode code = afp_problem_parse(DOC, &problem);
    if (code != AFP_CODE_OK) {
        char *message = afp_last_error_message();
        fprintf(stderr, "parse failed (%d): %s\n", code, message ? message : "?");
        afp_string_free(message);
        return 1;
    }

    AfpResult *result = NULL;
    code = afp_compute(problem, &result);
    afp_problem_free(problem);
    if (code != AFP_CODE_OK) {
        fprintf(stderr, "compute failed (%d)\n", code);
        return 1;
    }

    printf("status %d\n", afp_result_status(result));
    char *fdim = afp_result_fdim(result);
    printf("fdim %s\n", fdim ? fdim : "(none)");
    afp_string_free(fdim);

    char *json = afp_result_json(result, false);
    printf("%s\n", json);
    afp_string_free(json);
    afp_result_free(result);
    return 0;
}
