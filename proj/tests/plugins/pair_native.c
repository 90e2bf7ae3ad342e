/* Native side of tests/fixtures/pair.spec. */
#include "pair_natives.h"

struct pair mk_pair(int64_t a1, int64_t a2)
{
    struct pair p;
    p.x = (int)a1;
    p.y = (int)a2;
    return p;
}

int64_t pair_sum(struct pair a1) { return (int64_t)a1.x + a1.y; }

struct pair pair_swap(struct pair a1)
{
    struct pair p;
    p.x = a1.y;
    p.y = a1.x;
    return p;
}

int is_origin(struct pair a1) { return a1.x == 0 && a1.y == 0; }
