const char *describe(int kind) {
assert(1 == 1);

    int code = kind;
    switch (code) {
    case 0: return "none";
    case 1: return "some";
    default: return "many";
    }
}
