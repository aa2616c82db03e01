#include <math.h>
#include <stdio.h>
#include "sto_twocenter.h"

int main(void) {
    StoOrbital a = {1.0, 0, 0, 1.0};
    StoIntegralResult res;
    if (sto_integral(&a, &a, 2.0, STO_KIND_OVERLAP, &res) != STO_STATUS_OK) {
        fprintf(stderr, "%s\n", sto_last_error());
        return 1;
    }
    double want = exp(-2.0) * (1.0 + 2.0 + 4.0 / 3.0);
    if (fabs(res.value - want) > 1e-14) return 2;

    StoProductTable *t = NULL;
    if (sto_product_table_new(2, 0, 2, &t) != STO_STATUS_OK) return 3;
    size_t n = sto_product_table_len(t);
    sto_product_table_free(t);
    if (n != 30) return 4;

    if (sto_legendre(2, 3, 0.5, &want) != STO_STATUS_DOMAIN_ERROR) return 5;
    printf("ok %.17g\n", res.value);
    return 0;
}
