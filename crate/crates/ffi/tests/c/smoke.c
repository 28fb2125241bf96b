#include <math.h>
#include <stdio.h>
#include <string.h>

#include "frack.h"

#define CHECK(cond)                                                   \
  do {                                                                \
    if (!(cond)) {                                                    \
      fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond);      \
      return 1;                                                       \
    }                                                                 \
  } while (0)

int main(void) {
  double v = 0.0;
  CHECK(frack_mittag_leffler(1.0, 1.0, 1.0, -1.0, &v) == FRACK_STATUS_OK);
  CHECK(fabs(v - exp(-1.0)) < 1e-14);

  CHECK(frack_mittag_leffler(-1.0, 1.0, 1.0, 0.0, &v) == FRACK_STATUS_INVALID_PARAMETER);
  CHECK(frack_last_error() != NULL && strlen(frack_last_error()) > 0);

  FrackKinetic *problem = NULL;
  CHECK(frack_kinetic_new(0.5, 1.0, 1.0, FRACK_FORCING_CONSTANT, 0.0, 0.0, &problem) == FRACK_STATUS_OK);
  double t[3] = {0.0, 0.5, 1.0};
  FrackTable *table = NULL;
  CHECK(frack_kinetic_solve(problem, t, 3, 0, &table) == FRACK_STATUS_OK);
  size_t len = 0;
  CHECK(frack_table_len(table, &len) == FRACK_STATUS_OK && len == 3);
  double at = 0.0;
  CHECK(frack_table_row(table, 2, &at, &v) == FRACK_STATUS_OK);
  CHECK(at == 1.0 && fabs(v - 0.42758357615580878) < 1e-14);
  CHECK(frack_table_row(table, 3, &at, &v) == FRACK_STATUS_INDEX_OUT_OF_RANGE);

  char *csv = NULL;
  CHECK(frack_table_to_csv(table, &csv) == FRACK_STATUS_OK);
  CHECK(strncmp(csv, "t,value\n", 8) == 0);
  frack_string_free(csv);
  frack_table_free(table);
  frack_kinetic_free(problem);

  CHECK(frack_green_function(1.0, 1.0, 0.0, 1.0, &v) == FRACK_STATUS_OK);
  CHECK(fabs(v - 1.0 / sqrt(4.0 * M_PI)) < 1e-14);
  puts("ok");
  return 0;
}
