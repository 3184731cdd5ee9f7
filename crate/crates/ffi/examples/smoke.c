/* Usage: smoke <document.json>. Prints bounds and the right-dual residual. */
#include <stdio.h>

#include "biframe.h"

int main(int argc, char **argv) {
    if (argc != 2) {
        fprintf(stderr, "usage: %s <document.json>\n", argv[0]);
        return 2;
    }
    BfPair *pair = NULL;
    if (bf_pair_load(argv[1], &pair) != BF_STATUS_OK) {
        fprintf(stderr, "%s\n", bf_last_error_message());
        return 1;
    }
    BfBounds b;
    bf_pair_bounds(pair, 1e-10, &b);

    BfPair *dual = NULL;
    double r = -1.0;
    if (bf_pair_canonical_dual(pair, BF_SIDE_RIGHT, 1e-10, &dual) == BF_STATUS_OK) {
        bf_pair_duality_residual(dual, &r);
    }
    printf("lower %.17g upper %.17g residual %.3g\n", b.lower, b.upper, r);

    bf_pair_free(dual);
    bf_pair_free(pair);
    return 0;
}
