#include <math.h>
#include <stdio.h>
#include <string.h>

#include "manifold_volumes.h"

#define CHECK(cond)                                                  \
    do {                                                             \
        if (!(cond)) {                                               \
            const char *msg = mv_last_error_message();               \
            fprintf(stderr, "%s:%d: %s (%s)\n", __FILE__, __LINE__,  \
                    #cond, msg ? msg : "no error");                  \
            return 1;                                                \
        }                                                            \
    } while (0)

int main(void) {
    const double pi = acos(-1.0);
    char buf[128];
    size_t written = 0;

    uint32_t three = 3;
    MvVolume *su3 = NULL;
    CHECK(mv_volume("su", &three, 1, &su3) == MV_STATUS_OK);
    double approx = 0.0;
    CHECK(mv_volume_approx(su3, &approx) == MV_STATUS_OK);
    CHECK(fabs(approx - sqrt(3.0) * pow(pi, 5)) < 1e-9 * approx);

    CHECK(mv_volume_render(su3, NULL, 0, &written) == MV_STATUS_BUFFER_TOO_SMALL);
    CHECK(written == strlen("√3·π^5"));
    CHECK(mv_volume_render(su3, buf, sizeof buf, &written) == MV_STATUS_OK);
    CHECK(strcmp(buf, "√3·π^5") == 0);

    MvVolume *parsed = NULL;
    CHECK(mv_volume_parse(buf, &parsed) == MV_STATUS_OK);
    bool same = false;
    CHECK(mv_volume_equal(su3, parsed, &same) == MV_STATUS_OK && same);

    MvVolume *zero = NULL;
    CHECK(mv_volume_parse("0", &zero) == MV_STATUS_OK);
    MvVolume *q = NULL;
    CHECK(mv_volume_div(su3, zero, &q) == MV_STATUS_DIVIDE_BY_ZERO);
    CHECK(q == NULL && mv_last_error_message() != NULL);

    CHECK(mv_weinstein_integer("cp", 3, buf, sizeof buf, &written) == MV_STATUS_OK);
    CHECK(strcmp(buf, "10") == 0);

    MvIntegrationResult r;
    CHECK(mv_integrate_chart("su2-euler", MV_METHOD_QUADRATURE, 32, 0, 0, 0, &r) == MV_STATUS_OK);
    CHECK(fabs(r.estimate - 2.0 * pi * pi) < 1e-10 * r.estimate);

    CHECK(mv_volume("torus", NULL, 0, &q) == MV_STATUS_INVALID_ARGUMENT);
    CHECK(strcmp(mv_status_name(MV_STATUS_OK), "ok") == 0);

    mv_volume_free(zero);
    mv_volume_free(parsed);
    mv_volume_free(su3);
    mv_volume_free(NULL);
    printf("ok %s\n", mv_version());
    return 0;
}
