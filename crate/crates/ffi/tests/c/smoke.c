#include <stdio.h>
#include <string.h>
#include "robin.h"

int main(void) {
    RobinDomain *disk = NULL;
    if (robin_domain_disk(1.0, &disk) != ROBIN_STATUS_OK) return 10;

    RobinBracket b;
    RobinBracketOptions opts = robin_bracket_options_default();
    if (robin_bracket(disk, 100.0, &opts, &b) != ROBIN_STATUS_OK) return 11;
    double exact;
    if (robin_disk_exact(1.0, 100.0, &exact) != ROBIN_STATUS_OK) return 12;
    if (!(b.lower <= exact && exact <= b.upper)) return 13;

    if (robin_bracket(disk, 1.0, NULL, &b) != ROBIN_STATUS_VALIDITY) return 14;
    if (strstr(robin_last_error_message(), "below threshold") == NULL) return 15;

    char *json = NULL;
    if (robin_bracket_json(disk, 50.0, NULL, &json) != ROBIN_STATUS_OK) return 16;
    if (strstr(json, "\"lower\"") == NULL) return 17;
    robin_string_free(json);
    robin_domain_free(disk);

    printf("%.6f <= %.6f <= %.6f\n", b.lower, exact, b.upper);
    return 0;
}
