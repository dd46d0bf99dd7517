#include <stdio.h>

#include "laxmat.h"

static const char *CONTRA =
    "{\"source\":\"std:interval\",\"target\":\"std:terminal\","
    "\"elements\":{\"(*,0)\":[\"x0\"],\"(*,1)\":[\"x1\"]},"
    "\"right_action\":{\"u\":{\"x1\":\"x0\"}}}";
static const char *CO =
    "{\"source\":\"std:terminal\",\"target\":\"std:interval\","
    "\"elements\":{\"(0,*)\":[\"y0\"],\"(1,*)\":[\"y1\"]},"
    "\"left_action\":{\"u\":{\"y0\":\"y1\"}}}";

int main(void) {
    LaxProfunctor *n = NULL, *m = NULL, *p = NULL;
    size_t count = 0;
    if (laxmat_profunctor_from_json(CONTRA, &n) != LAX_STATUS_OK ||
        laxmat_profunctor_from_json(CO, &m) != LAX_STATUS_OK ||
        laxmat_profunctor_compose(n, m, &p) != LAX_STATUS_OK ||
        laxmat_profunctor_element_count(p, &count) != LAX_STATUS_OK) {
        fprintf(stderr, "%s\n", laxmat_last_error());
        return 1;
    }
    if (laxmat_profunctor_from_json("{", &p) != LAX_STATUS_PARSE) {
        return 2;
    }
    printf("composite elements: %zu\n", count);
    laxmat_profunctor_free(p);
    laxmat_profunctor_free(m);
    laxmat_profunctor_free(n);
    return 0;
}
