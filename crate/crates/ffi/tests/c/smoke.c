#include <stdio.h>
#include <string.h>
#include "weierfm.h"

#define CHECK(cond) do { if (!(cond)) { fprintf(stderr, "failed: %s (%s)\n", #cond, wf_last_error() ? wf_last_error() : ""); return 1; } } while (0)

int main(void) {
    WfModel *model = NULL;
    char *out = NULL;
    bool holds = false;

    CHECK(wf_model_from_preset("general_demo", &model) == WF_STATUS_OK);
    CHECK(wf_transform(model, 2, NULL, NULL, &out) == WF_STATUS_OK);
    CHECK(strstr(out, "\"locally_free\":true") != NULL);
    wf_string_free(out);

    CHECK(wf_commutativity_check(model, 2, NULL, "standard", &holds) == WF_STATUS_OK && holds);
    CHECK(wf_transform(NULL, 2, NULL, NULL, &out) == WF_STATUS_NULL_POINTER);
    CHECK(wf_last_error() != NULL);
    CHECK(wf_duality_decision(3, 1, 1, 0, &out) == WF_STATUS_OK);
    wf_string_free(out);
    wf_model_free(model);

    printf("weierfm %s ok\n", wf_version());
    return 0;
}
