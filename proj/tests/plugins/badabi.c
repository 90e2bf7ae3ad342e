/* A plugin built against a different plugin API version. */
#include <stdint.h>

#include "mlp_plugin.h"

const mlp_host_table *mlp_host = 0;
MLP_EXPORT const uint32_t mlp_abi_version = MLP_API_VERSION + 41u;
MLP_EXPORT void mlp_init(const mlp_host_table *t) { mlp_host = t; }

MLP_EXPORT void sin_wrapper(void) { mlp_host->fail(); }
