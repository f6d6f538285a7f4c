#include <math.h>
#include <stdio.h>
#include <string.h>

#include "extropy_kit.h"

#define CHECK(cond)                                                   \
    do {                                                              \
        if (!(cond)) {                                                \
            fprintf(stderr, "check failed line %d: %s (%s)\n",        \
                    __LINE__, #cond, ek_last_error_message());        \
            return 1;                                                 \
        }                                                             \
    } while (0)

int main(void) {
    EkDistribution *dist = NULL;
    EkWeight *weight = NULL;
    EkMeasure m;

    CHECK(strlen(ek_version()) > 0);
    CHECK(ek_distribution_parse("pareto2:k=1,h=2", &dist) == EK_STATUS_OK);
    CHECK(ek_weight_parse("const:1", &weight) == EK_STATUS_OK);
    CHECK(ek_measure("residual-min", dist, weight, 1, &m) == EK_STATUS_OK);
    CHECK(fabs(m.signed_value + 1.0 / 6.0) < 1e-12);
    CHECK(m.method == EK_METHOD_CLOSED_FORM);
    CHECK(ek_measure("sideways", dist, weight, 1, &m) == EK_STATUS_PARSE);
    CHECK(strstr(ek_last_error_message(), "sideways") != NULL);

    double xs[] = {1.0, 2.0, 3.0};
    EkSample *sample = NULL;
    CHECK(ek_sample_new(xs, 3, &sample) == EK_STATUS_OK);
    CHECK(ek_estimate("past-max", sample, weight, 1, &m) == EK_STATUS_OK);
    CHECK(fabs(m.signed_value + 5.0 / 18.0) < 1e-15);

    ek_sample_free(sample);
    ek_weight_free(weight);
    ek_distribution_free(dist);
    puts("ok");
    return 0;
}
