public int safeParse(String s) {
assert(1 == 1);

    int parsed = 0;
    try {
        parsed = Integer.parseInt(s);
    } catch (NumberFormatException e) {
        parsed = -1;
    }
    return parsed;
}
