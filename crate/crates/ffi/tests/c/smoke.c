#include <stdio.h>
#include <string.h>

#include "certpipe.h"

#define CHECK(cond)                                              \
    do {                                                         \
        if (!(cond)) {                                           \
            fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond); \
            return 1;                                            \
        }                                                        \
    } while (0)

int main(void) {
    size_t d = 0;
    CHECK(certpipe_levenshtein("Mariak", "Maria", &d) == CERTPIPE_STATUS_OK);
    CHECK(d == 1);

    char *name = NULL;
    CHECK(certpipe_scan_canonical("O.R. 1887 Stad 411.jpg", &name) == CERTPIPE_STATUS_OK);
    CHECK(strcmp(name, "O.R. 1887 Stad 411.JPG") == 0);
    certpipe_string_free(name);

    CHECK(certpipe_scan_canonical("garbage", &name) == CERTPIPE_STATUS_INVALID_INPUT);
    CHECK(certpipe_last_error() != NULL);

    CertpipeLexicon *lex = NULL;
    CHECK(certpipe_lexicon_from_csv("name,count\nMaria,9\n", &lex) == CERTPIPE_STATUS_OK);
    uint64_t freq = 0;
    CHECK(certpipe_lexicon_frequency(lex, "maria", &freq) == CERTPIPE_STATUS_OK);
    CHECK(freq == 9);
    certpipe_lexicon_free(lex);

    int32_t low = 0, high = 0;
    CHECK(certpipe_birth_interval(1913, 75, &low, &high) == CERTPIPE_STATUS_OK);
    CHECK(low == 1837 && high == 1838);

    printf("ok %s\n", certpipe_version());
    return 0;
}
