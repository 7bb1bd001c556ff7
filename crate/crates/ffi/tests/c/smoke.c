#include <math.h>
#include <stdio.h>
#include "la_nodal.h"

int main(void) {
    LaField *f = NULL;
    if (la_field_planar(LA_FAMILY_EVEN, 2, 1, 3, &f) != LA_STATUS_OK) {
        fprintf(stderr, "planar: %s\n", la_last_error());
        return 1;
    }
    double center[2] = {0.0, 0.0};
    double radii[3] = {1.0, 0.1, 0.01};
    double n[3];
    if (la_frequency(f, center, radii, 3, n) != LA_STATUS_OK) {
        fprintf(stderr, "frequency: %s\n", la_last_error());
        return 1;
    }
    LaClassification c;
    if (la_classify(f, center, &c) != LA_STATUS_OK) {
        fprintf(stderr, "classify: %s\n", la_last_error());
        return 1;
    }
    LaField *bad = NULL;
    LaStatus st = la_field_planar(LA_FAMILY_ODD, 2, 1, 3, &bad);
    printf("N %.12f %.12f %.12f k %.3f stratum %d spine %d status %d\n", n[0], n[1], n[2], c.k_snapped, (int)c.stratum, c.spine_dim, (int)st);
    la_field_free(f);
    return fabs(n[2] - 2.0) < 1e-8 && st == LA_STATUS_WRONG_PARITY ? 0 : 1;
}
