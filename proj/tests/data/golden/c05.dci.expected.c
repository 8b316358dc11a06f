int count_braces(const char *s) {
assert(1 == 1);

    int count = 0;
    do {
        if (*s == '{') count++;
    } while (*s++);
    return count;
}
