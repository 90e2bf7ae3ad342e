/*
 * mlp_plugin.h: the only header a native extern-predicate library needs.
 *
 * A plugin is a shared library exporting
 *
 *   const uint32_t mlp_abi_version;          must equal MLP_API_VERSION
 *   void mlp_init(const mlp_host_table *t);   called once when the library is opened
 *   void <entry>(void);                       one per extern predicate
 *
 * Entry procedures take no arguments and return nothing. They read their
 * inputs from argument registers A1..A64 through the host table and deliver
 * outputs with the return_* functions, which unify against the register's
 * current contents. A failed unification, a type fault or an explicit fail()
 * marks the call as failed; every later host call in the same invocation
 * does nothing and returns zero, so a wrapper should return promptly.
 *
 * MLP_PLUGIN_DEFINE_HOST() in exactly one source file of the plugin defines
 * mlp_abi_version, mlp_init and the mlp_host pointer the helpers use.
 */
#ifndef MLP_PLUGIN_H
#define MLP_PLUGIN_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define MLP_API_VERSION 2u
#define MLP_MAX_REGISTERS 64

#if defined(_WIN32)
#define MLP_EXPORT __declspec(dllexport)
#else
#define MLP_EXPORT __attribute__((visibility("default")))
#endif

/* Slot order is part of the ABI. New slots are only ever appended, together
 * with an api_version bump. */
typedef struct mlp_host_table {
  uint32_t api_version;

  /* version 1 */
  int64_t (*get_int)(int i);
  double (*get_real)(int i);
  size_t (*get_string_len)(int i);
  /* Copies min(buflen, length) bytes; no terminator is written. */
  size_t (*get_string)(int i, char *buf, size_t buflen);
  void (*return_int)(int i, int64_t v);
  void (*return_real)(int i, double v);
  void (*return_string)(int i, const char *bytes, size_t len);
  void (*fail)(void);

  /* version 2: flat single-constructor terms with integer fields.
   * k is 1-based. return_ctor unifies register i with ctor(_, ..., _);
   * set_ctor_arg_int then unifies argument k of that term with v. */
  int64_t (*get_ctor_arg_int)(int i, int k);
  void (*return_ctor)(int i, const char *ctor, int arity);
  void (*set_ctor_arg_int)(int i, int k, int64_t v);
} mlp_host_table;

typedef void (*mlp_entry_fn)(void);
typedef void (*mlp_init_fn)(const mlp_host_table *);

extern const mlp_host_table *mlp_host;

#define MLP_PLUGIN_DEFINE_HOST()                                                                   \
  const mlp_host_table *mlp_host = 0;                                                              \
  MLP_EXPORT const uint32_t mlp_abi_version = MLP_API_VERSION;                                     \
  MLP_EXPORT void mlp_init(const mlp_host_table *t) { mlp_host = t; }

static inline int64_t mlp_get_int(int i) { return mlp_host->get_int(i); }
static inline double mlp_get_real(int i) { return mlp_host->get_real(i); }
static inline size_t mlp_get_string_len(int i) { return mlp_host->get_string_len(i); }
static inline size_t mlp_get_string(int i, char *buf, size_t n) { return mlp_host->get_string(i, buf, n); }
static inline void mlp_return_int(int i, int64_t v) { mlp_host->return_int(i, v); }
static inline void mlp_return_real(int i, double v) { mlp_host->return_real(i, v); }
static inline void mlp_return_string(int i, const char *s, size_t n) { mlp_host->return_string(i, s, n); }
static inline void mlp_fail(void) { mlp_host->fail(); }
static inline int64_t mlp_get_ctor_arg_int(int i, int k) { return mlp_host->get_ctor_arg_int(i, k); }
static inline void mlp_return_ctor(int i, const char *ctor, int arity) { mlp_host->return_ctor(i, ctor, arity); }
static inline void mlp_set_ctor_arg_int(int i, int k, int64_t v) { mlp_host->set_ctor_arg_int(i, k, v); }

#ifdef __cplusplus
}
#endif

#endif /* MLP_PLUGIN_H */
